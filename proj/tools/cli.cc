// Copyright 2026 The bornlab Authors
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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "bornlab/born.hpp"
#include "bornlab/ensemble.hpp"
#include "bornlab/errors.hpp"
#include "bornlab/format.hpp"
#include "bornlab/hilbert.hpp"
#include "bornlab/measurement.hpp"
#include "bornlab/pointer.hpp"
#include "bornlab/serialization.hpp"
#include "bornlab/sweeps.hpp"

namespace bornlab::cli {

namespace {

using nlohmann::ordered_json;

struct InstanceArgs {
    std::optional<int> dim;
    std::string state;
    std::string eigenvalues;
    std::string instance_file;
    std::uint64_t seed = 0;
};

struct PointerArgs {
    double coupling = 1.0;
    double tau = 1.0;
    int particles = 100;
    double sigma = 1.0;
    std::optional<double> grid_extent;
    int grid_points = 1024;
};

struct OutputArgs {
    std::string out;
    std::string format = "csv";
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& a) {
    cmd->add_option("--dim", a.dim, "dimension of a seeded random instance");
    cmd->add_option("--state", a.state, "amplitudes as JSON [[re,im],...]; normalized on read");
    cmd->add_option("--eigenvalues", a.eigenvalues, "eigenvalues, comma separated or JSON array");
    cmd->add_option("--instance", a.instance_file, "JSON file with amplitudes, eigenvalues and optional basis");
    cmd->add_option("--seed", a.seed, "seed for random instances and sampling");
}

void add_pointer_flags(CLI::App* cmd, PointerArgs& p) {
    cmd->add_option("--coupling", p.coupling, "coupling constant lambda");
    cmd->add_option("--tau", p.tau, "total interaction time tau (dt = tau / N)");
    cmd->add_option("--particles", p.particles, "particle count N");
    cmd->add_option("--sigma", p.sigma, "pointer width (position standard deviation)");
    cmd->add_option("--grid-extent", p.grid_extent, "grid half-width L (default 20 sigma)");
    cmd->add_option("--grid-points", p.grid_points, "grid point count M (power of two)");
}

void add_output_flags(CLI::App* cmd, OutputArgs& o) {
    cmd->add_option("--out", o.out, "output file");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Instance resolve_instance(const InstanceArgs& a, std::ostream& err) {
    if (!a.instance_file.empty()) {
        return instance_from_json(read_file(a.instance_file));
    }
    if (!a.state.empty()) {
        if (a.eigenvalues.empty()) {
            throw InvalidArgument("--state needs --eigenvalues");
        }
        auto amps = parse_complex_list(a.state);
        const double n = norm(amps);
        if (std::abs(n * n - 1.0) > kNormTolerance) {
            err << "note: input state renormalized (|psi|^2 = " << format_double(n * n) << ")\n";
        }
        auto psi = StateVector::normalized(std::move(amps));
        Observable obs(parse_real_list(a.eigenvalues));
        if (obs.dim() != psi.dim()) {
            throw DimensionMismatch("state has dimension " + std::to_string(psi.dim()) + " but " +
                                    std::to_string(obs.dim()) + " eigenvalues were given");
        }
        return Instance{std::move(psi), std::move(obs)};
    }
    if (a.dim) {
        return random_instance(*a.dim, a.seed);
    }
    throw InvalidArgument("give --state/--eigenvalues, --instance or --dim");
}

PointerWavefunction make_pointer(const PointerArgs& p) {
    if (!(p.sigma > 0.0)) {
        throw InvalidArgument("--sigma must be positive");
    }
    const PointerGrid grid(p.grid_extent.value_or(20.0 * p.sigma), p.grid_points);
    return gaussian_init(grid, 0.0, p.sigma);
}

ordered_json complex_json(std::span<const Complex> v) {
    ordered_json arr = ordered_json::array();
    for (const auto& z : v) {
        arr.push_back({z.real(), z.imag()});
    }
    return arr;
}

std::string complex_text(std::span<const Complex> v) { return complex_json(v).dump(); }

void emit(const OutputArgs& o, const std::string& contents) {
    if (!o.out.empty()) {
        write_file_atomically(o.out, contents);
    }
}

int cmd_decompose(const InstanceArgs& ia, const OutputArgs& oa, std::ostream& out, std::ostream& err) {
    const auto inst = resolve_instance(ia, err);
    const auto dec = decompose(inst.state, inst.observable);
    const double residual = reconstruction_residual(inst.state, inst.observable, dec);
    const double overlap = dec.perp ? std::abs(inner(inst.state.amplitudes(), dec.perp->amplitudes())) : 0.0;

    out << "mean = " << format_double(dec.mean) << '\n';
    out << "uncertainty = " << format_double(dec.uncertainty) << '\n';
    out << "perp = " << (dec.perp ? complex_text(dec.perp->amplitudes()) : std::string("absent")) << '\n';
    out << "residual = " << format_double(residual) << '\n';
    out << "overlap = " << format_double(overlap) << '\n';

    ordered_json j;
    j["mean"] = dec.mean;
    j["uncertainty"] = dec.uncertainty;
    j["perp"] = dec.perp ? complex_json(dec.perp->amplitudes()) : ordered_json(nullptr);
    j["residual"] = residual;
    j["overlap"] = overlap;
    if (oa.format == "json") {
        emit(oa, j.dump(2) + "\n");
    } else {
        std::string csv = "quantity,value\nmean," + format_double(dec.mean) + "\nuncertainty," +
                          format_double(dec.uncertainty) + "\nresidual," + format_double(residual) + "\n";
        emit(oa, csv);
    }
    if (residual > kIdentityTolerance || overlap > kIdentityTolerance) {
        err << "decomposition identity violated\n";
        return kExitInvariant;
    }
    return kExitOk;
}

int cmd_evolve(const InstanceArgs& ia, const PointerArgs& pa, const OutputArgs& oa, std::ostream& out,
               std::ostream& err) {
    const auto inst = resolve_instance(ia, err);
    const auto pointer = make_pointer(pa);
    const MeasurementConfig cfg(pa.coupling, pa.tau, pa.particles);
    const ProductEnsemble ens(inst.state, pa.particles);
    const auto ev = evolve_joint(ens, inst.observable, cfg, pointer);
    const auto dist = pointer_distribution_after(ev);
    const auto after = moments(dist);
    const auto q = moments(ev.pointer());
    const double sigma_q2 = q.variance + q.mean * q.mean;

    const double shift = after.mean - ev.initial_position_mean();
    const double ortho = orthogonal_weight(ev);
    const double leading = leading_order_weight(ens, inst.observable, cfg, sigma_q2);
    const double infid = infidelity_to_shifted(ev);

    out << "mean_shift = " << format_double(shift) << '\n';
    out << "expected_shift = " << format_double(pa.coupling * pa.tau * expectation(inst.state, inst.observable))
        << '\n';
    out << "pointer_variance = " << format_double(after.variance) << '\n';
    out << "orthogonal_weight = " << format_double(ortho) << '\n';
    out << "leading_order = " << format_double(leading) << '\n';
    out << "fidelity = " << format_double(fidelity_to_shifted(ev)) << '\n';
    out << "infidelity = " << format_double(infid) << '\n';

    if (oa.format == "json") {
        ordered_json j;
        j["mean_shift"] = shift;
        j["pointer_variance"] = after.variance;
        j["orthogonal_weight"] = ortho;
        j["leading_order"] = leading;
        j["fidelity"] = fidelity_to_shifted(ev);
        j["infidelity"] = infid;
        emit(oa, j.dump(2) + "\n");
    } else {
        emit(oa, to_csv(dist));
    }
    return kExitOk;
}

struct SweepArgs {
    std::string counts = "25,50,100,200,400,800,1600,3200";
    std::string quantities = "orthogonal_weight,infidelity";
    std::optional<double> synthetic_exponent;
    int min_fit = kDefaultMinFitCount;
    std::string rule = "born";
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            parts.push_back(item);
        }
    }
    return parts;
}

int cmd_sweep(const InstanceArgs& ia, const PointerArgs& pa, const SweepArgs& sa, const OutputArgs& oa,
              std::ostream& out, std::ostream& err) {
    std::vector<int> counts;
    for (const auto& c : split_csv(sa.counts)) {
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(c, &used);
            if (used != c.size()) {
                throw std::invalid_argument(c);
            }
        } catch (const std::exception&) {
            throw InvalidArgument("cannot parse particle count '" + c + "'");
        }
        counts.push_back(v);
    }

    if (sa.synthetic_exponent) {
        std::vector<double> ns(counts.begin(), counts.end());
        std::vector<double> ys;
        for (double n : ns) {
            ys.push_back(std::pow(n, -*sa.synthetic_exponent));
        }
        const auto fit = fit_power_law(ns, ys, sa.min_fit);
        const auto summary = fit_summary_json("synthetic", fit);
        out << summary << '\n';
        emit(oa, summary + "\n");
        return kExitOk;
    }

    const auto inst = resolve_instance(ia, err);
    SweepPlan plan{inst.state, inst.observable};
    plan.coupling = pa.coupling;
    plan.tau = pa.tau;
    plan.sigma = pa.sigma;
    plan.grid = PointerGrid(pa.grid_extent.value_or(20.0 * pa.sigma), pa.grid_points);
    plan.counts = counts;
    for (const auto& q : split_csv(sa.quantities)) {
        plan.quantities.push_back(parse_quantity(q));
    }
    plan.rule.tag = parse_rule_tag(sa.rule);
    plan.seed = ia.seed;
    plan.min_fit_count = sa.min_fit;

    const auto table = run_sweep(plan);
    ordered_json summaries = ordered_json::array();
    for (const char* column : {"orthogonal_weight", "infidelity"}) {
        if (std::find(table.columns.begin(), table.columns.end(), column) == table.columns.end()) {
            continue;
        }
        try {
            const auto fit = fit_power_law(table, column);
            const auto s = fit_summary_json(column, fit);
            out << s << '\n';
            summaries.push_back(ordered_json::parse(s));
        } catch (const NumericalFloor& e) {
            err << column << " not fitted: " << e.what() << '\n';
        } catch (const InvalidArgument& e) {
            err << column << " not fitted: " << e.what() << '\n';
        }
    }
    emit(oa, oa.format == "json" ? summaries.dump(2) + "\n" : to_csv(table));
    return kExitOk;
}

struct BornArgs {
    std::string rule = "born";
    std::string custom;
    double scan_step = 0.01;
};

int cmd_born_check(const InstanceArgs& ia, const PointerArgs& pa, const BornArgs& ba, const OutputArgs& oa,
                   std::ostream& out, std::ostream& err) {
    const auto inst = resolve_instance(ia, err);
    ProbabilityRule rule;
    rule.tag = parse_rule_tag(ba.rule);
    if (rule.tag == RuleTag::custom) {
        rule.custom = parse_real_list(ba.custom);
    }
    const double residual = consistency_residual(rule, inst.state, inst.observable);
    out << "rule = " << rule_name(rule.tag) << '\n';
    out << "residual = " << format_double(residual) << '\n';

    // Uniqueness: the instance spectrum plus seeded extra spectra until the span condition holds.
    const std::size_t d = inst.state.dim();
    const StateVector eig(eigen_amplitudes(inst.state, inst.observable));
    std::vector<std::vector<double>> spectra{
        std::vector<double>(inst.observable.eigenvalues().begin(), inst.observable.eigenvalues().end())};
    for (std::uint64_t k = 1; spectra.size() + 1 < d || !spectra_span_simplex(spectra, d); ++k) {
        const auto extra = random_instance(static_cast<int>(d), ia.seed + 7919 * k);
        spectra.emplace_back(extra.observable.eigenvalues().begin(), extra.observable.eigenvalues().end());
    }
    ordered_json scan = ordered_json::array();
    std::string scan_note;
    try {
        for (const auto& p : uniqueness_scan(eig, spectra, ba.scan_step)) {
            scan.push_back(p);
        }
        if (scan.empty()) {
            scan_note = "no grid point is consistent (Born vector off the scan grid)";
        }
    } catch (const BudgetExceeded& e) {
        scan_note = e.what();
    }
    out << "uniqueness_scan = " << scan.dump() << '\n';
    if (!scan_note.empty()) {
        err << "uniqueness_scan: " << scan_note << '\n';
    }

    const auto pointer = make_pointer(pa);
    const MeasurementConfig cfg(pa.coupling, pa.tau, pa.particles);
    const auto report = macro_micro_test(rule, inst.state, inst.observable, cfg, pointer, ia.seed);
    const auto report_json = to_json(report);
    out << report_json << '\n';

    if (oa.format == "json" || oa.out.empty()) {
        emit(oa, report_json + "\n");
    } else {
        std::string csv = "rule,macro_mean,micro_mean,z_score,verdict\n";
        csv += report.rule + "," + format_double(report.macro_mean) + "," + format_double(report.micro_mean) + "," +
               format_double(report.z_score) + "," + (report.consistent ? "consistent" : "inconsistent") + "\n";
        emit(oa, csv);
    }
    return kExitOk;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const GridOverflow*>(&e) || dynamic_cast<const BudgetExceeded*>(&e)) {
        return kExitResource;
    }
    if (dynamic_cast<const InvalidArgument*>(&e)) {
        return kExitMalformed;
    }
    return kExitInvariant;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bornlab: numerical checks of the von Neumann measurement route to the Born rule"};
    app.require_subcommand(1);

    InstanceArgs ia;
    PointerArgs pa;
    OutputArgs oa;
    SweepArgs sa;
    BornArgs ba;

    auto* decompose_cmd = app.add_subcommand("decompose", "split A|psi> into mean and orthogonal parts");
    add_instance_flags(decompose_cmd, ia);
    add_output_flags(decompose_cmd, oa);

    auto* evolve_cmd = app.add_subcommand("evolve", "couple a pointer to N particles and report the pointer");
    add_instance_flags(evolve_cmd, ia);
    add_pointer_flags(evolve_cmd, pa);
    add_output_flags(evolve_cmd, oa);

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep N and fit power laws");
    add_instance_flags(sweep_cmd, ia);
    add_pointer_flags(sweep_cmd, pa);
    add_output_flags(sweep_cmd, oa);
    sweep_cmd->add_option("--counts", sa.counts, "comma-separated, strictly increasing particle counts");
    sweep_cmd->add_option("--quantities", sa.quantities,
                          "orthogonal_weight, infidelity, pointer_mean, pointer_variance, macro_micro");
    sweep_cmd->add_option("--synthetic-exponent", sa.synthetic_exponent, "fit y = N^-p instead of simulating");
    sweep_cmd->add_option("--min-fit", sa.min_fit, "smallest N used in fits");
    sweep_cmd->add_option("--rule", sa.rule, "rule for the macro_micro quantity");

    auto* born_cmd = app.add_subcommand("born-check", "consistency residual, uniqueness scan, macro/micro test");
    add_instance_flags(born_cmd, ia);
    add_pointer_flags(born_cmd, pa);
    add_output_flags(born_cmd, oa);
    born_cmd->add_option("--rule", ba.rule, "born, abs_amplitude, quartic, uniform or custom");
    born_cmd->add_option("--custom", ba.custom, "probability vector for --rule custom");
    born_cmd->add_option("--scan-step", ba.scan_step, "simplex grid step for the uniqueness scan");
    pa.particles = 100;

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitMalformed;
    }

    try {
        if (decompose_cmd->parsed()) {
            return cmd_decompose(ia, oa, out, err);
        }
        if (evolve_cmd->parsed()) {
            return cmd_evolve(ia, pa, oa, out, err);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(ia, pa, sa, oa, out, err);
        }
        if (born_cmd->parsed()) {
            if (born_cmd->count("--particles") == 0) {
                pa.particles = 10000;
            }
            return cmd_born_check(ia, pa, ba, oa, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitMalformed;
}

}  // namespace bornlab::cli
