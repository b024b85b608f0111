// Copyright 2026 The SQMG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"
#include "sqmg/pipeline/pipeline.hpp"

namespace sqmg {

using nlohmann::json;

double ScalingFit::factor_per_atom() const { return std::exp(slope); }

std::vector<ScalingFit> fit_scaling(std::span<const BenchRecord> records, std::uint32_t n_min, std::uint32_t n_max) {
    std::map<std::pair<Backend, AnsatzVariant>, std::vector<std::pair<double, double>>> groups;
    for (const BenchRecord& r : records) {
        if (r.status != "ok" || r.median_s <= 0.0 || r.n_atoms < n_min || r.n_atoms > n_max) continue;
        groups[{r.backend, r.variant}].emplace_back(r.n_atoms, std::log(r.median_s));
    }
    std::vector<ScalingFit> out;
    for (const auto& [key, pts] : groups) {
        if (pts.size() < 2) continue;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        ScalingFit f;
        f.backend = key.first;
        f.variant = key.second;
        f.points = static_cast<std::uint32_t>(pts.size());
        f.n_min = UINT32_MAX;
        for (const auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            f.n_min = std::min(f.n_min, static_cast<std::uint32_t>(x));
            f.n_max = std::max(f.n_max, static_cast<std::uint32_t>(x));
        }
        const double n = static_cast<double>(pts.size());
        const double den = n * sxx - sx * sx;
        if (den <= 0.0) continue;
        f.slope = (n * sxy - sx * sy) / den;
        f.intercept = (sy - f.slope * sx) / n;
        out.push_back(f);
    }
    return out;
}

std::vector<ReuseRatio> reuse_ratios(std::span<const BenchRecord> records) {
    std::map<std::uint32_t, ReuseRatio> by_n;
    std::map<std::uint32_t, int> seen;
    for (const BenchRecord& r : records) {
        if (r.backend != Backend::kMps || r.status != "ok") continue;
        ReuseRatio& q = by_n[r.n_atoms];
        q.n_atoms = r.n_atoms;
        if (r.variant == AnsatzVariant::kHybrid) {
            q.hybrid_s = r.median_s;
            seen[r.n_atoms] |= 1;
        } else {
            q.static_s = r.median_s;
            seen[r.n_atoms] |= 2;
        }
    }
    std::vector<ReuseRatio> out;
    for (const auto& [n, q] : by_n) {
        if (seen[n] == 3 && q.hybrid_s > 0.0) out.push_back(q);
    }
    return out;
}

json bench_summary_json(std::span<const BenchRecord> records) {
    json fits = json::array();
    for (const ScalingFit& f : fit_scaling(records)) {
        fits.push_back({{"backend", backend_name(f.backend)},
                        {"variant", variant_name(f.variant)},
                        {"points", f.points},
                        {"n_min", f.n_min},
                        {"n_max", f.n_max},
                        {"slope", f.slope},
                        {"intercept", f.intercept},
                        {"factor_per_atom", f.factor_per_atom()}});
    }
    json ratios = json::array();
    for (const ReuseRatio& q : reuse_ratios(records)) {
        ratios.push_back({{"n_atoms", q.n_atoms},
                          {"hybrid_s", q.hybrid_s},
                          {"static_s", q.static_s},
                          {"static_over_hybrid", q.static_over_hybrid()}});
    }
    json capacity = json::array();
    for (const BenchRecord& r : records) {
        if (r.status != "ok") {
            capacity.push_back({{"backend", backend_name(r.backend)},
                                {"variant", variant_name(r.variant)},
                                {"n_atoms", r.n_atoms},
                                {"qubits", r.qubits},
                                {"status", r.status}});
        }
    }
    return {{"rows", records.size()}, {"fits", fits}, {"reuse", ratios}, {"failures", capacity}};
}

std::string bench_report_csv(std::span<const BenchRecord> records) {
    std::ostringstream out;
    out.precision(9);
    out << "kind,backend,variant,n_atoms,metric,value\n";
    for (const BenchRecord& r : records) {
        if (r.status != "ok") continue;
        out << "runtime," << backend_name(r.backend) << ',' << variant_name(r.variant) << ',' << r.n_atoms
            << ",median_s," << r.median_s << '\n';
    }
    for (const ScalingFit& f : fit_scaling(records)) {
        const std::string head = std::string("fit,") + std::string(backend_name(f.backend)) + ',' +
                                 std::string(variant_name(f.variant)) + ",,";
        out << head << "slope," << f.slope << '\n';
        out << head << "intercept," << f.intercept << '\n';
        out << head << "factor_per_atom," << f.factor_per_atom() << '\n';
        out << head << "n_min," << f.n_min << '\n';
        out << head << "n_max," << f.n_max << '\n';
    }
    for (const ReuseRatio& q : reuse_ratios(records)) {
        out << "reuse,mps,," << q.n_atoms << ",static_over_hybrid," << q.static_over_hybrid() << '\n';
    }
    return out.str();
}

std::string trajectory_csv(std::span<const HistoryRow> rows) {
    std::ostringstream out;
    out.precision(17);
    out << "iteration,y,running_max,moving_avg3\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        double sum = 0.0;
        for (std::size_t k = lo; k <= i; ++k) sum += rows[k].y;
        out << rows[i].iteration << ',' << rows[i].y << ',' << rows[i].running_max << ','
            << sum / static_cast<double>(i - lo + 1) << '\n';
    }
    return out.str();
}

std::vector<std::string> run_report(const std::string& input_path, const std::string& output_dir) {
    const std::string text = read_file(input_path);
    const std::filesystem::path dir(output_dir);
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    auto emit = [&](const char* name, const std::string& body) {
        const std::string path = (dir / name).string();
        write_file(path, body);
        written.push_back(path);
    };
    if (text.rfind("backend,variant,n_atoms", 0) == 0) {
        const auto records = parse_bench_csv(text);
        emit("bench_report.csv", bench_report_csv(records));
        emit("bench_summary.json", bench_summary_json(records).dump(2) + "\n");
        return written;
    }
    const std::string first = text.substr(0, text.find('\n'));
    json head;
    try {
        head = json::parse(first);
    } catch (const json::exception&) {
        fail(ErrorCode::kFormat, input_path + ": not a history JSONL, molecules JSONL or bench CSV");
    }
    if (head.is_object() && head.contains("iteration")) {
        emit("trajectory.csv", trajectory_csv(parse_history_jsonl(text)));
    } else if (head.is_object() && head.contains("atoms") && head.contains("valid")) {
        emit("metrics.json", metrics_json(metrics_from_molecules_jsonl(text)).dump(2) + "\n");
    } else {
        fail(ErrorCode::kFormat, input_path + ": not a history JSONL, molecules JSONL or bench CSV");
    }
    return written;
}

}  // namespace sqmg
