/*
 * pymodule.cpp -- pybind11 surface over the core library: code
 * construction, encode/decode/repair, verification, counting, planning,
 * and simulated failure trials.
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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "emsr/cluster_sim.hpp"
#include "emsr/emsr_code.hpp"
#include "emsr/outer_code.hpp"

namespace py = pybind11;
using namespace emsr;

namespace {

py::dict report_to_dict(const BandwidthReport& rep, const BandwidthCheck& bw) {
    py::dict out;
    out["failed"] = rep.failed;
    out["budget_symbols"] = rep.budget;
    out["max_helper_symbols"] = rep.max_helper;
    out["total_symbols"] = rep.total;
    out["per_helper"] = rep.per_helper;
    out["bandwidth_pass"] = bw.pass;
    out["hypothesis_holds"] = bw.hypothesis_holds;
    out["epsilon_vacuous"] = bw.epsilon_vacuous;
    return out;
}

std::set<std::uint64_t> to_set(const std::vector<std::uint64_t>& v) {
    return std::set<std::uint64_t>(v.begin(), v.end());
}

} // namespace

PYBIND11_MODULE(_emsr, m) {
    m.doc() = "epsilon-MSR erasure codes with bandwidth-metered repair";

    py::register_exception<Error>(m, "Error");

    py::class_<EmsrCode>(m, "Code")
        .def_static(
            "build",
            [](std::uint32_t n, std::uint32_t k, std::uint32_t t,
               std::uint32_t q, std::uint32_t N, std::uint32_t K,
               double epsilon) {
                return build_emsr_auto(n, k, t, q, N, K, epsilon);
            },
            py::arg("n"), py::arg("k"), py::arg("t"), py::arg("q"),
            py::arg("N"), py::arg("K"), py::arg("epsilon"),
            "Compose inner and outer codes over the smallest admissible "
            "prime field.")
        .def_property_readonly(
            "p", [](const EmsrCode& c) { return c.inner.field.modulus(); })
        .def_property_readonly("blocks", &EmsrCode::num_blocks)
        .def_property_readonly("data_blocks", &EmsrCode::data_blocks)
        .def_property_readonly("contacted", &EmsrCode::contacted)
        .def_property_readonly("block_symbols", &EmsrCode::block_len)
        .def_property_readonly("epsilon",
                               [](const EmsrCode& c) { return c.epsilon; })
        .def_property_readonly("sigma",
                               [](const EmsrCode& c) { return c.sigma; })
        .def_property_readonly("delta", &EmsrCode::delta)
        .def_property_readonly("helper_budget_symbols", &EmsrCode::helper_budget)
        .def_property_readonly("hypothesis_holds",
                               &EmsrCode::delta_hypothesis_holds)
        .def_property_readonly("epsilon_vacuous", &EmsrCode::epsilon_vacuous)
        .def(
            "encode",
            [](const EmsrCode& c, const std::vector<Fe>& message) {
                return emsr_encode(c, message);
            },
            py::arg("message"),
            "Systematic encoding of data_blocks * block_symbols symbols "
            "into one block per storage node.")
        .def(
            "verify",
            [](const EmsrCode& c, const EmsrCodeword& word) {
                return emsr_verify(c, word);
            },
            py::arg("word"))
        .def(
            "decode",
            [](const EmsrCode& c, const EmsrCodeword& word,
               const std::vector<std::uint64_t>& erased) {
                return emsr_decode_erasures(c, word, to_set(erased));
            },
            py::arg("word"), py::arg("erased"),
            "Reconstruct all blocks; the erased blocks' contents are "
            "ignored.")
        .def(
            "repair",
            [](const EmsrCode& c, const EmsrCodeword& word,
               std::uint64_t failed,
               const std::optional<std::vector<std::uint64_t>>& helpers) {
                RepairPlan plan = helpers ? plan_repair(c, failed, *helpers)
                                          : plan_repair(c, failed);
                RepairResult res = execute_repair(c, word, plan);
                BandwidthCheck bw = bandwidth_check(res.report, c);
                py::dict out;
                out["block"] = res.block;
                out["helpers"] = plan.helpers;
                out["report"] = report_to_dict(res.report, bw);
                return out;
            },
            py::arg("word"), py::arg("failed"),
            py::arg("helpers") = py::none(),
            "Repair one block, never reading its slot; reports per-helper "
            "download counts.")
        .def(
            "compulsory",
            [](const EmsrCode& c, std::uint64_t failed) {
                CompulsoryInfo info = compulsory_sets(c, failed);
                py::dict out;
                out["q_sets"] = info.q_sets;
                out["united"] = info.united;
                out["helper_count"] = info.helper_count;
                out["inclusive_bound"] = info.inclusive_bound;
                return out;
            },
            py::arg("failed"))
        .def(
            "mds_check",
            [](const EmsrCode& c, bool exhaustive, std::uint64_t samples,
               std::uint64_t seed) {
                MdsReport rep = mds_check(c, exhaustive, samples, seed);
                py::dict out;
                out["checked"] = rep.checked;
                out["pass"] = rep.pass;
                if (rep.witness) {
                    py::dict w;
                    w["blocks"] = rep.witness->blocks;
                    w["coordinate"] = rep.witness->coordinate;
                    out["witness"] = w;
                }
                return out;
            },
            py::arg("exhaustive") = false, py::arg("samples") = 100,
            py::arg("seed") = 0)
        .def("full_weight",
             [](const EmsrCode& c) { return full_weight_count(c.outer); });

    m.def("fw_lower_bound", &fw_lower_bound, py::arg("N"), py::arg("K"),
          py::arg("g"), py::arg("q"),
          "Truncated inclusion-exclusion lower bound on the full-weight "
          "count of an RS outer code.");

    m.def(
        "ag_plan",
        [](std::uint32_t r, double epsilon, std::uint32_t u) {
            PlanParams p = ag_plan(r, epsilon, u);
            py::dict out;
            out["r"] = p.r;
            out["epsilon"] = p.epsilon;
            out["u"] = p.u;
            out["threshold"] = p.threshold;
            out["q_min"] = p.q_min;
            out["q_min_root"] = p.q_min_root;
            out["delta_min"] = p.delta_min;
            out["genus_ratio"] = p.genus_ratio;
            out["k_rule"] = p.k_rule;
            out["tprime_exponent"] = p.tprime_exponent;
            out["tprime_rule"] = p.tprime_rule;
            out["subpacketization"] = p.subpacketization_note;
            out["field_size"] = p.field_size_note;
            return out;
        },
        py::arg("r"), py::arg("epsilon"), py::arg("u"),
        "Parameters for the asymptotic family: smallest admissible square "
        "prime field and minimum relative distance.");

    m.def(
        "simulate",
        [](std::uint32_t n, std::uint32_t k, std::uint32_t t, std::uint32_t q,
           std::uint32_t N, std::uint32_t K, double epsilon,
           std::uint64_t trials, std::uint64_t seed,
           const std::string& failure_policy, const std::string& free_policy) {
            SimConfig cfg;
            cfg.n = n;
            cfg.k = k;
            cfg.t = t;
            cfg.q = q;
            cfg.N = N;
            cfg.K = K;
            cfg.epsilon = epsilon;
            cfg.trials = trials;
            cfg.seed = seed;
            if (failure_policy == "round-robin")
                cfg.failure_policy = FailurePolicy::round_robin;
            else if (failure_policy == "seeded-random")
                cfg.failure_policy = FailurePolicy::seeded_random;
            else
                raise(Errc::bad_config, "unknown failure policy");
            if (free_policy == "ascending")
                cfg.free_policy = FreePolicy::ascending;
            else if (free_policy == "seeded-random")
                cfg.free_policy = FreePolicy::seeded_random;
            else
                raise(Errc::bad_config, "unknown free-helper policy");

            SimReport rep = run_trials(cfg);
            py::list per_trial;
            for (const TrialReport& tr : rep.trials) {
                py::dict d;
                d["trial"] = tr.trial;
                d["failed"] = tr.failed;
                d["helpers"] = tr.contacted;
                d["compulsory"] = tr.compulsory;
                d["max_helper_symbols"] = tr.max_helper_symbols;
                d["budget_symbols"] = tr.budget_symbols;
                d["pass"] = tr.pass;
                per_trial.append(d);
            }
            py::dict out;
            out["field_modulus"] = rep.field_modulus;
            out["pass_count"] = rep.pass_count;
            out["fail_count"] = rep.fail_count;
            out["max_helper_symbols"] = rep.max_helper_symbols;
            out["mean_max_helper_symbols"] = rep.mean_max_helper_symbols;
            out["compulsory_histogram"] = rep.compulsory_histogram;
            out["hypothesis_holds"] = rep.hypothesis_holds;
            out["epsilon_vacuous"] = rep.epsilon_vacuous;
            out["per_trial"] = per_trial;
            return out;
        },
        py::arg("n"), py::arg("k"), py::arg("t"), py::arg("q"), py::arg("N"),
        py::arg("K"), py::arg("epsilon"), py::arg("trials"),
        py::arg("seed") = 0, py::arg("failure_policy") = "round-robin",
        py::arg("free_policy") = "ascending",
        "Run failure/repair trials and aggregate bandwidth statistics.");
}
