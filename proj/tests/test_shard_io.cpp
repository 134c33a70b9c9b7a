/*
 * test_shard_io.cpp -- shard container round-trips and corruption handling,
 * descriptor persistence, file framing, config parsing, report formats.
 *
 * Copyright 2026 emsr contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "emsr/shard_io.hpp"
#include "test_util.hpp"

using namespace emsr;
namespace fs = std::filesystem;

namespace {

const EmsrCode& desk() {
    static EmsrCode code = build_emsr_auto(5, 2, 3, 5, 4, 2, 0.5);
    return code;
}

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "emsr_test_io";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::uint8_t> file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void put_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("shard files round-trip and reject corruption") {
    const EmsrCode& code = desk();
    fs::path path = temp_dir() / "block_007.shard";

    std::vector<Fe> payload(code.block_len());
    for (std::size_t i = 0; i < payload.size(); ++i)
        payload[i] = static_cast<Fe>(i % 107);
    ShardHeader hdr = make_shard_header(code, 7, payload.size());
    CHECK(hdr.p == 107);
    CHECK(hdr.block == 7);
    write_shard(path.string(), hdr, payload);

    LoadedShard loaded = read_shard(path.string());
    CHECK(loaded.header.p == 107);
    CHECK(loaded.header.n == 5);
    CHECK(loaded.header.q == 5);
    CHECK(loaded.header.block == 7);
    CHECK(loaded.payload == payload);

    std::vector<std::uint8_t> raw = file_bytes(path);
    CHECK(raw.size() == 41 + 4 * payload.size());

    // bad magic
    auto bad = raw;
    bad[0] = 'X';
    put_bytes(path, bad);
    CHECK_ERRC(read_shard(path.string()), Errc::corrupt_shard);

    // bad version
    bad = raw;
    bad[4] = 9;
    put_bytes(path, bad);
    CHECK_ERRC(read_shard(path.string()), Errc::corrupt_shard);

    // truncation
    bad = raw;
    bad.resize(raw.size() - 5);
    put_bytes(path, bad);
    CHECK_ERRC(read_shard(path.string()), Errc::corrupt_shard);

    // trailing garbage
    bad = raw;
    bad.push_back(0);
    put_bytes(path, bad);
    CHECK_ERRC(read_shard(path.string()), Errc::corrupt_shard);

    // symbol out of field range: first payload symbol forced to p
    bad = raw;
    bad[41] = 107;
    bad[42] = bad[43] = bad[44] = 0;
    put_bytes(path, bad);
    CHECK_ERRC(read_shard(path.string()), Errc::corrupt_shard);

    CHECK_ERRC(read_shard((temp_dir() / "absent.shard").string()),
               Errc::corrupt_shard);

    CHECK_ERRC(write_shard(path.string(), hdr, std::vector<Fe>(3)),
               Errc::dimension_mismatch);
}

TEST_CASE("headers alone rebuild the code deterministically") {
    const EmsrCode& code = desk();
    ShardHeader hdr = make_shard_header(code, 1, code.block_len());
    EmsrCode rebuilt = code_from_header(hdr, 0.5);
    CHECK(rebuilt.inner.field.modulus() == 107);
    CHECK(rebuilt.sigma == code.sigma);
    CHECK(rebuilt.epsilon == doctest::Approx(0.5));

    ShardHeader nonsense = hdr;
    nonsense.t = 4; // t = n-1 is invalid
    CHECK_ERRC(code_from_header(nonsense, 0.5), Errc::corrupt_shard);
    nonsense = hdr;
    nonsense.p = 11; // too small for the scalar predicate
    CHECK_ERRC(code_from_header(nonsense, 0.5), Errc::corrupt_shard);
}

TEST_CASE("descriptor round-trips and cross-checks recorded tables") {
    const EmsrCode& code = desk();
    fs::path path = temp_dir() / "emsr_code.json";
    write_descriptor(path.string(), code);

    EmsrCode loaded = read_descriptor(path.string());
    CHECK(loaded.inner.field.modulus() == 107);
    CHECK(loaded.sigma == code.sigma);
    CHECK(loaded.epsilon == doctest::Approx(0.5));
    CHECK(loaded.outer.M == 25);

    // tampered sigma must be caught by the cross-check
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    in.close();
    std::string tampered = text;
    auto pos = tampered.find("100");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 3, "101");
    fs::path bad_path = temp_dir() / "tampered.json";
    std::ofstream(bad_path) << tampered;
    CHECK_ERRC(read_descriptor(bad_path.string()), Errc::bad_config);

    std::ofstream(bad_path, std::ios::trunc) << "{not json";
    CHECK_ERRC(read_descriptor(bad_path.string()), Errc::bad_config);

    CHECK_ERRC(read_descriptor((temp_dir() / "absent.json").string()),
               Errc::bad_config);
}

TEST_CASE("framing: symbol width, stripe count, and capacity") {
    const EmsrCode& code = desk();

    FileFraming f0 = plan_framing(code, 0);
    CHECK(f0.bits_per_symbol == 6); // 2^6 = 64 <= 107 < 128
    CHECK(f0.stripes == 1);
    CHECK(f0.capacity_bits == 22 * 128 * 6);

    FileFraming f4k = plan_framing(code, 4096);
    CHECK(f4k.stripes == 2); // 8*4096 + 64 = 32832 > 16896 = one stripe
    CHECK(f4k.capacity_bits == 2 * 16896);
    CHECK(f4k.message_symbols == 2 * 22 * 128);

    // largest single-stripe file: 16896 - 64 bits = 2104 bytes
    CHECK(plan_framing(code, 2104).stripes == 1);
    CHECK(plan_framing(code, 2105).stripes == 2);
}

TEST_CASE("pack and unpack invert each other across sizes") {
    const EmsrCode& code = desk();
    std::mt19937_64 rng(61);
    for (std::uint64_t len : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{5},
                              std::uint64_t{2104}, std::uint64_t{2105},
                              std::uint64_t{4096}, std::uint64_t{5000}}) {
        std::vector<std::uint8_t> bytes(len);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        FileFraming framing = plan_framing(code, len);
        std::vector<Fe> symbols = pack_file(code, bytes, framing);
        CHECK(symbols.size() == framing.message_symbols);
        for (Fe s : symbols) CHECK(s < 64);
        CHECK(unpack_file(code, symbols) == bytes);
    }

    // impossible trailer length
    FileFraming framing = plan_framing(code, 1);
    std::vector<Fe> symbols = pack_file(code, {0x41}, framing);
    for (std::size_t i = symbols.size() - 12; i < symbols.size(); ++i)
        symbols[i] = 63; // saturate the trailer bits
    CHECK_ERRC(unpack_file(code, symbols), Errc::corrupt_shard);

    // partial stripes are rejected
    symbols = pack_file(code, {0x41}, framing);
    symbols.pop_back();
    CHECK_ERRC(unpack_file(code, symbols), Errc::corrupt_shard);
}

TEST_CASE("simulation config parsing accepts the documented schema") {
    std::string text = R"({
        "inner": {"n": 5, "k": 2, "t": 3},
        "outer": {"q": 5, "N": 4, "K": 2},
        "epsilon": 0.5,
        "trials": 25,
        "seed": 7,
        "policies": {"failure": "round-robin", "free_helpers": "ascending"},
        "output": {"csv": "out.csv", "json": "out.json"}
    })";
    SimConfig cfg = parse_sim_config(text);
    CHECK(cfg.n == 5);
    CHECK(cfg.k == 2);
    CHECK(cfg.t == 3);
    CHECK(cfg.q == 5);
    CHECK(cfg.N == 4);
    CHECK(cfg.K == 2);
    CHECK(cfg.epsilon == doctest::Approx(0.5));
    CHECK(cfg.trials == 25);
    CHECK(cfg.seed == 7);
    CHECK(cfg.failure_policy == FailurePolicy::round_robin);
    CHECK(cfg.free_policy == FreePolicy::ascending);
    CHECK(cfg.csv_path == "out.csv");
    CHECK(cfg.json_path == "out.json");

    std::string minimal = R"({
        "inner": {"n": 5, "k": 2, "t": 3},
        "outer": {"q": 5, "N": 4, "K": 2},
        "epsilon": 0.5,
        "trials": 2,
        "seed": 1,
        "policies": {"failure": "seeded-random", "free_helpers": "seeded-random"}
    })";
    SimConfig small = parse_sim_config(minimal);
    CHECK(small.failure_policy == FailurePolicy::seeded_random);
    CHECK(small.free_policy == FreePolicy::seeded_random);
    CHECK(small.csv_path.empty());
    CHECK(small.json_path.empty());

    CHECK_ERRC(parse_sim_config("{"), Errc::bad_config);
    CHECK_ERRC(parse_sim_config("{}"), Errc::bad_config);
    CHECK_ERRC(parse_sim_config(R"({"inner": {"n": 5, "k": 2, "t": 3},
        "outer": {"q": 5, "N": 4, "K": 2}, "epsilon": 0.5, "trials": 2,
        "seed": 1, "policies": {"failure": "coin-flip",
        "free_helpers": "ascending"}})"),
               Errc::bad_config);
}

TEST_CASE("report serializations carry pinned columns and keys") {
    SimConfig cfg;
    cfg.n = 5;
    cfg.k = 2;
    cfg.t = 3;
    cfg.q = 5;
    cfg.N = 4;
    cfg.K = 2;
    cfg.epsilon = 0.5;
    cfg.trials = 2;
    cfg.seed = 3;
    SimReport rep = run_trials(cfg);

    std::string csv = sim_report_csv(rep);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "trial,failed,helpers,compulsory,max_helper_symbols,budget_symbols,pass");
    std::string row;
    int rows = 0;
    while (std::getline(lines, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 2);
    CHECK(csv.find("96,1") != std::string::npos); // integral budget, pass flag

    std::string json = sim_report_json(rep);
    for (const char* key :
         {"\"config\"", "\"field_modulus\"", "\"pass_count\"", "\"fail_count\"",
          "\"max_helper_symbols\"", "\"mean_max_helper_symbols\"",
          "\"compulsory_histogram\"", "\"hypothesis_holds\"",
          "\"epsilon_vacuous\"", "\"per_trial\""})
        CHECK(json.find(key) != std::string::npos);
    CHECK(json.find("107") != std::string::npos);
    CHECK(json.back() == '\n');
}
