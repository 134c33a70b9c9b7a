/*
 * shard_io.hpp -- shard files, code descriptors, file framing, and report
 * serialization for the CLI.
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
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emsr/cluster_sim.hpp"
#include "emsr/emsr_code.hpp"

namespace emsr {

// Binary shard layout: magic "EMSR", version u8, then little-endian u32
// fields p, n, k, t, q, N, K, block index, payload length (in symbols),
// followed by payload symbols as little-endian u32. The header alone
// reconstructs the code: lambda and sigma are deterministic given p.
struct ShardHeader {
    std::uint32_t p = 0;
    std::uint32_t n = 0, k = 0, t = 0;
    std::uint32_t q = 0, N = 0, K = 0;
    std::uint32_t block = 0;       // 1-based
    std::uint32_t payload_len = 0; // symbols; stripes * N * ell
};

struct LoadedShard {
    ShardHeader header;
    std::vector<Fe> payload;
};

ShardHeader make_shard_header(const EmsrCode& code, std::uint64_t block,
                              std::uint64_t payload_len);

void write_shard(const std::string& path, const ShardHeader& header,
                 const std::vector<Fe>& payload);

// Throws CorruptShard on bad magic/version, truncated data, payload length
// mismatch, or symbols outside [0, p).
LoadedShard read_shard(const std::string& path);

// Rebuilds the code a header describes (deterministic scalar selection over
// the recorded prime). Invalid parameter combinations throw CorruptShard.
EmsrCode code_from_header(const ShardHeader& header, double epsilon);

std::string shard_path(const std::string& dir, std::uint64_t block);

// JSON descriptor written by `build` and consumed by the other subcommands;
// records the chosen prime, lambda, sigma and derived parameters. Reading
// rebuilds the code deterministically and cross-checks the recorded tables
// (BadConfig on mismatch or malformed JSON).
void write_descriptor(const std::string& path, const EmsrCode& code);
EmsrCode read_descriptor(const std::string& path);

// File framing: the input byte stream is packed MSB-first into symbols of
// bits_per_symbol bits (the largest b <= 8 with 2^b <= p), zero-padded, with
// an 8-byte little-endian length trailer in the final 64 bits. Stripes is
// the smallest count whose capacity holds data plus trailer.
struct FileFraming {
    std::uint32_t bits_per_symbol = 0;
    std::uint64_t stripes = 0;
    std::uint64_t capacity_bits = 0;
    std::uint64_t message_symbols = 0; // stripes * (M-r) * N * ell
};

FileFraming plan_framing(const EmsrCode& code, std::uint64_t file_len);

// Packs bytes into framing.message_symbols symbols (message layout for
// stripe-by-stripe encoding).
std::vector<Fe> pack_file(const EmsrCode& code, const std::vector<std::uint8_t>& bytes,
                          const FileFraming& framing);

// Inverse of pack_file over however many whole stripes the symbols span.
// Throws CorruptShard when the trailer length is impossible.
std::vector<std::uint8_t> unpack_file(const EmsrCode& code,
                                      const std::vector<Fe>& symbols);

// Parses the simulation RunConfig JSON document (BadConfig on schema
// violations). Keys: inner{n,k,t}, outer{q,N,K}, epsilon, trials, seed,
// policies{failure, free_helpers}, output{csv, json} (output optional).
SimConfig parse_sim_config(const std::string& json_text);

// Deterministic serializations; identical seed + config give byte-identical
// strings (wall-clock fields are deliberately excluded).
std::string sim_report_csv(const SimReport& report);
std::string sim_report_json(const SimReport& report);

} // namespace emsr
