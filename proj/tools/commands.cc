// Copyright 2026 The tcq Authors
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

#include "commands.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "tcq/analysis.h"
#include "tcq/errorsim.h"
#include "tcq/hash.h"
#include "tcq/matchprep.h"
#include "tcq/pipeline.h"
#include "tcq/syndrome.h"

namespace tcq::cli {

namespace {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string dims;
    double p = 1e-4;
    double ploss = 0.0;
    int d = 12;
    int me = 0;
    int n = 0;
    int64_t trials = 0;
    uint64_t seed = 1;
    std::string mode = "global";
    int jobs = 1;
    std::string format = "csv";
    std::string output;
    std::string input;
    std::string baseline = "random";
    std::string emit = "events";
    std::string summary;
    std::string dump;
    int64_t oracle_trials = 1000;
    std::vector<int> edges;
    std::vector<int> me_values;
    double alpha = 0.0;
    double beta = 0.0;
    std::string timing;
    bool printed_form = false;
    std::string approx = "rounded";
    bool through_stream = false;
};

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::replace(s.begin(), s.end(), 'x', ' ');
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) {
            throw ConfigError(std::string("bad ") + what + " '" + text + "'");
        }
        out.push_back(v);
    }
    return out;
}

LatticeDims parse_dims(const std::string& text) {
    const std::vector<int> v = parse_int_list(text, "--dims");
    LatticeDims dims;
    if (v.size() == 1) {
        dims = LatticeDims::cube(v[0]);
    } else if (v.size() == 3) {
        dims = {v[0], v[1], v[2]};
    } else {
        throw ConfigError("--dims takes N or NX,NY,NT");
    }
    try {
        dims.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--dims: ") + e.what());
    }
    return dims;
}

int resolve_me(const Options& o) {
    const int me = o.me > 0 ? o.me : o.d / 2;
    if (me < 1) {
        throw ConfigError("m_e must be at least 1 (set --me or --d >= 2)");
    }
    return me;
}

int resolve_n(const Options& o, int me) {
    if (o.n > 0) {
        return o.n;
    }
    try {
        return table_region_size(me);
    } catch (const std::out_of_range&) {
        throw ConfigError("no tabulated window edge for m_e = " + std::to_string(me) +
                          "; pass --n");
    }
}

DecodeMode parse_mode(const std::string& s) {
    try {
        return decode_mode_from_string(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

BaselineMode parse_baseline(const std::string& s) {
    try {
        return baseline_mode_from_string(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json dims_json(const LatticeDims& d) {
    return json::array({d.nx, d.ny, d.nt});
}

// Output sink: a file when a path is given, otherwise the command's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw std::runtime_error("cannot open '" + path + "' for writing");
            }
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::string read_input(const std::string& path) {
    std::ostringstream buf;
    if (path.empty() || path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open '" + path + "'");
        }
        buf << in.rdbuf();
    }
    return buf.str();
}

// ---- simulate ------------------------------------------------------------

int command_simulate(const Options& o, std::ostream& out) {
    const LatticeDims dims = parse_dims(o.dims.empty() ? "20" : o.dims);
    const ErrorModel model{o.p, o.ploss, o.seed};
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (o.emit != "events" && o.emit != "stream") {
        throw ConfigError("--emit must be 'events' or 'stream'");
    }
    const StreamHeader header{dims, o.seed, parse_baseline(o.baseline), o.seed};
    const ErrorConfiguration errors = sample_errors(dims, model);
    const MeasurementStream stream = measurement_stream(dims, errors, header);

    json config = {{"command", "simulate"},      {"dims", dims_json(dims)},
                   {"p", o.p},                   {"ploss", o.ploss},
                   {"seed", o.seed},             {"baseline", to_string(header.baseline_mode)},
                   {"emit", o.emit}};
    Sink sink(o.output, out);
    std::ostream& os = sink.get();
    if (o.emit == "stream") {
        os << "# " << config.dump() << '\n';
        write_stream(os, stream);
        return 0;
    }
    const SyndromeResult syn = extract_detection_events(stream);
    config["z_errors"] = errors.z_errors.size();
    config["losses"] = errors.losses.size();
    config["events"] = syn.events.size();
    config["heralded_failure"] = syn.heralded_failure;
    config["boundary_absorbed"] = syn.boundary_absorbed;
    os << "# " << config.dump() << '\n';
    write_events(os, syn.events);
    return 0;
}

// ---- decode --------------------------------------------------------------

std::string fail_axes(const LogicalFailure& f) {
    std::string s;
    static const char* kAxis = "xyt";
    for (int k = 0; k < 2; ++k) {
        for (int a = 0; a < 3; ++a) {
            if (f.flags[k][a]) {
                if (!s.empty()) {
                    s += ' ';
                }
                s += kind_letter(static_cast<CellKind>(k));
                s += kAxis[a];
            }
        }
    }
    return s;
}

json summary_json(const TrialSummary& s) {
    const auto ci = s.trials > 0 ? wilson_interval(s.failures, s.trials) : std::pair{0.0, 0.0};
    json j = {{"trials", s.trials},
              {"failures", s.failures},
              {"failure_rate", s.failure_rate()},
              {"failure_rate_ci95", {ci.first, ci.second}},
              {"gave_up", s.gave_up},
              {"oversize_trials", s.oversize_trials},
              {"oversize_components", s.oversize_components},
              {"mean_events", s.mean_events},
              {"mean_components", s.mean_components},
              {"tree_seconds", s.tree_seconds},
              {"match_seconds", s.match_seconds}};
    if (s.compared > 0) {
        j["compared"] = s.compared;
        j["bounded_compared"] = s.bounded_compared;
        j["bounded_agreed"] = s.bounded_agreed;
        j["agreement"] = s.bounded_compared > 0 ? static_cast<double>(s.bounded_agreed) /
                                                      static_cast<double>(s.bounded_compared)
                                                : 1.0;
    }
    return j;
}

json report_json(const TrialReport& r) {
    return {{"trial", r.trial},
            {"seed", r.seed},
            {"z_errors", r.z_errors},
            {"losses", r.losses},
            {"events", r.events},
            {"components", r.components},
            {"oversize", r.oversize},
            {"unmatchable", r.unmatchable},
            {"heralded_loss", r.heralded_loss},
            {"failed", r.failed()},
            {"fail_axes", fail_axes(r.failure)},
            {"agreement", r.agreement},
            {"syndrome_seconds", r.syndrome_seconds},
            {"tree_seconds", r.tree_seconds},
            {"match_seconds", r.match_seconds}};
}

TrialConfig trial_config(const Options& o, const char* default_dims, DecodeMode mode) {
    TrialConfig c;
    c.dims = parse_dims(o.dims.empty() ? default_dims : o.dims);
    c.p_z = o.p;
    c.p_loss = o.ploss;
    c.m_e = resolve_me(o);
    c.mode = mode;
    c.n = mode == DecodeMode::kGlobal ? (o.n > 0 ? o.n : 1) : resolve_n(o, c.m_e);
    c.trials = o.trials > 0 ? o.trials : 100;
    c.seed = o.seed;
    c.jobs = o.jobs;
    c.through_stream = o.through_stream;
    c.baseline = parse_baseline(o.baseline);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

json trial_config_json(const char* command, const TrialConfig& c) {
    return {{"command", command},       {"dims", dims_json(c.dims)}, {"p", c.p_z},
            {"ploss", c.p_loss},        {"m_e", c.m_e},              {"n", c.n},
            {"trials", c.trials},       {"seed", c.seed},            {"mode", to_string(c.mode)},
            {"through_stream", c.through_stream}};
}

int decode_file(const Options& o, std::ostream& out) {
    const std::string text = read_input(o.input);
    std::optional<LatticeDims> dims;
    if (!o.dims.empty()) {
        dims = parse_dims(o.dims);
    }
    bool is_stream = false;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            if (line[0] == '#') {
                const json header = json::parse(line.substr(1), nullptr, false);
                if (!dims && header.is_object() && header.contains("dims")) {
                    const auto& d = header["dims"];
                    dims = LatticeDims{d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()};
                }
                continue;
            }
            is_stream = line[0] == 'H';
            break;
        }
    }
    std::vector<DetectionEvent> events;
    bool heralded = false;
    std::istringstream in(text);
    if (is_stream) {
        const MeasurementStream stream = read_stream(in);
        dims = stream.header.dims;
        const SyndromeResult syn = extract_detection_events(stream);
        events = syn.events;
        heralded = syn.heralded_failure;
    } else {
        events = read_events(in);
    }
    if (!dims) {
        throw ConfigError("event file has no dims header; pass --dims");
    }
    dims->validate();
    const int me = resolve_me(o);
    const DecodeMode mode = parse_mode(o.mode);
    DecodeResult result;
    int agreement = -1;
    if (mode == DecodeMode::kParallel) {
        result = decode_parallel(*dims, events, me, resolve_n(o, me), o.jobs);
    } else {
        result = decode_global(*dims, events, me);
        if (mode == DecodeMode::kBoth) {
            agreement = decode_parallel(*dims, events, me, resolve_n(o, me), o.jobs).corrections ==
                                result.corrections
                            ? 1
                            : 0;
        }
    }
    int64_t total = 0;
    for (const Correction& c : result.corrections) {
        total += c.weight;
    }
    json summary = {{"command", "decode"},
                    {"dims", dims_json(*dims)},
                    {"m_e", me},
                    {"mode", to_string(mode)},
                    {"events", events.size()},
                    {"components", result.components},
                    {"corrections", result.corrections.size()},
                    {"total_weight", total},
                    {"oversize", result.oversize},
                    {"unmatchable", result.unmatchable},
                    {"heralded_failure", heralded}};
    if (agreement >= 0) {
        summary["agreement"] = agreement;
    }
    Sink sink(o.output, out);
    std::ostream& os = sink.get();
    if (o.format == "json") {
        json pairs = json::array();
        for (const Correction& c : result.corrections) {
            json pj = {{"kind", std::string(1, kind_letter(c.a.kind))},
                       {"a", {c.a.i, c.a.j, c.a.t}},
                       {"weight", c.weight}};
            pj["b"] = c.b ? json::array({c.b->i, c.b->j, c.b->t}) : json("boundary");
            pairs.push_back(pj);
        }
        summary["pairs"] = pairs;
        os << summary.dump(2) << '\n';
        return 0;
    }
    os << "kind,a_i,a_j,a_t,partner,b_i,b_j,b_t,weight\n";
    for (const Correction& c : result.corrections) {
        os << kind_letter(c.a.kind) << ',' << c.a.i << ',' << c.a.j << ',' << c.a.t << ',';
        if (c.b) {
            os << "event," << c.b->i << ',' << c.b->j << ',' << c.b->t;
        } else {
            os << "boundary,-1,-1,-1";
        }
        os << ',' << c.weight << '\n';
    }
    os << "# " << summary.dump() << '\n';
    return 0;
}

int command_decode(const Options& o, std::ostream& out) {
    if (o.format != "csv" && o.format != "json") {
        throw ConfigError("--format must be csv or json");
    }
    if (!o.input.empty()) {
        return decode_file(o, out);
    }
    const TrialConfig config = trial_config(o, "20", parse_mode(o.mode));
    const std::vector<TrialReport> reports = run_trials(config);
    const TrialSummary summary = summarize(reports);
    json head = trial_config_json("decode", config);
    Sink sink(o.output, out);
    std::ostream& os = sink.get();
    if (o.format == "json") {
        json all = {{"config", head}, {"summary", summary_json(summary)}};
        json rows = json::array();
        for (const TrialReport& r : reports) {
            rows.push_back(report_json(r));
        }
        all["trials"] = rows;
        os << all.dump(2) << '\n';
        return 0;
    }
    os << "# " << head.dump() << '\n';
    os << "trial,seed,z_errors,losses,events,components,oversize,unmatchable,heralded_loss,"
          "failed,fail_axes,agreement,syndrome_seconds,tree_seconds,match_seconds\n";
    for (const TrialReport& r : reports) {
        os << r.trial << ',' << r.seed << ',' << r.z_errors << ',' << r.losses << ',' << r.events
           << ',' << r.components << ',' << r.oversize << ',' << r.unmatchable << ','
           << r.heralded_loss << ',' << r.failed() << ',' << fail_axes(r.failure) << ','
           << r.agreement << ',' << r.syndrome_seconds << ',' << r.tree_seconds << ','
           << r.match_seconds << '\n';
    }
    const json sj = summary_json(summary);
    if (!o.summary.empty()) {
        Sink summary_sink(o.summary, out);
        summary_sink.get() << sj.dump(2) << '\n';
    } else {
        os << "# summary " << sj.dump() << '\n';
    }
    return 0;
}

// ---- verify --------------------------------------------------------------

int command_verify(const Options& o, std::ostream& out) {
    const TrialConfig config = trial_config(o, "60", parse_mode(o.mode.empty() ? "both" : o.mode));
    const TrialSummary s = summarize(run_trials(config));
    const OracleCheck oracle = compare_with_oracle(o.oracle_trials, o.seed);
    const double agreement = s.bounded_compared > 0 ? static_cast<double>(s.bounded_agreed) /
                                                          static_cast<double>(s.bounded_compared)
                                                    : 1.0;
    json j = {{"config", trial_config_json("verify", config)},
              {"bounded_trials", s.bounded_compared},
              {"agreement", agreement},
              {"oversize_components", s.oversize_components},
              {"oracle_instances", oracle.instances},
              {"oracle_weight_agreement", oracle.weight_agreed},
              {"oracle_pair_agreement", oracle.pairs_agreed}};
    Sink sink(o.output, out);
    std::ostream& os = sink.get();
    if (o.format == "json") {
        os << j.dump(2) << '\n';
    } else {
        os << "# " << j["config"].dump() << '\n';
        os << std::fixed << std::setprecision(3);
        os << "parallel_vs_global_agreement," << agreement << ",bounded_trials,"
           << s.bounded_compared << ",oversize_components," << s.oversize_components << '\n';
        os << "blossom_vs_bruteforce_weight," << oracle.weight_agreed << '/' << oracle.instances
           << ",pairs," << oracle.pairs_agreed << '/' << oracle.instances << '\n';
    }
    const bool ok = agreement == 1.0 && oracle.weight_agreed == oracle.instances;
    return ok ? 0 : 1;
}

// ---- components ----------------------------------------------------------

std::string members_field(const DetectionEvent& e) {
    std::string s;
    for (const CellCoord& c : e.members()) {
        if (!s.empty()) {
            s += ';';
        }
        s += kind_letter(c.kind);
        s += ':' + std::to_string(c.i) + ':' + std::to_string(c.j) + ':' + std::to_string(c.t);
    }
    return s;
}

int command_components(const Options& o, std::ostream& out) {
    const LatticeDims dims = parse_dims(o.dims.empty() ? "50" : o.dims);
    const int me = resolve_me(o);
    const int64_t trials = o.trials > 0 ? o.trials : 100;
    if (!(o.p >= 0.0 && o.p <= 1.0)) {
        throw ConfigError("--p must lie in [0, 1]");
    }
    const ComponentStudy study = component_distribution(dims, o.p, me, trials, o.seed, o.jobs);
    json head = {{"command", "components"}, {"dims", dims_json(dims)}, {"p", o.p},
                 {"m_e", me},               {"trials", trials},        {"seed", o.seed},
                 {"components", study.components}};
    if (study.fit) {
        head["fit"] = {{"alpha", study.fit->alpha},
                       {"beta", study.fit->beta},
                       {"r_squared", study.fit->r_squared},
                       {"window", {study.fit->first, study.fit->last}}};
        if (o.p > 0.0 && o.p < 0.0061) {
            try {
                head["n_solved"] =
                    region_size_exact({o.p, 0.0061, me, ApproxMode::kRounded}, *study.fit);
            } catch (const std::domain_error& e) {
                head["n_solved_error"] = e.what();
            }
        }
    } else {
        head["fit"] = "insufficient tail data";
    }
    Sink sink(o.output, out);
    std::ostream& os = sink.get();
    if (o.format == "json") {
        head["histogram"] = study.extents.counts;
        os << head.dump(2) << '\n';
    } else {
        os << "# " << head.dump() << '\n';
        os << "extent,count,relative_frequency\n";
        const int64_t ref = study.extents.at(1);
        for (int k = 0; k <= study.extents.max_value(); ++k) {
            os << k << ',' << study.extents.at(k) << ','
               << (ref > 0 ? static_cast<double>(study.extents.at(k)) / static_cast<double>(ref)
                           : 0.0)
               << '\n';
        }
    }
    if (!o.dump.empty()) {
        Sink dump(o.dump, out);
        std::ostream& ds = dump.get();
        ds << "trial,component,size,extent,members\n";
        for (int64_t k = 0; k < trials; ++k) {
            const uint64_t s = hash_combine(o.seed ^ kTrialStream, static_cast<uint64_t>(k));
            const auto syn =
                detection_events_from_errors(dims, sample_errors(dims, {o.p, 0.0, s}));
            const MatchGraph g = build_bounded_graph(dims, syn.events, me);
            int id = 0;
            for (const auto& comp : connected_components(g)) {
                std::string members;
                for (int e : comp) {
                    if (!members.empty()) {
                        members += ' ';
                    }
                    members += members_field(g.events[e]);
                }
                ds << k << ',' << id++ << ',' << comp.size() << ',' << component_extent(g, comp)
                   << ',' << members << '\n';
            }
        }
    }
    return 0;
}

// ---- bench ---------------------------------------------------------------

int command_bench(const Options& o, std::ostream& out) {
    BenchConfig config;
    if (!o.edges.empty()) {
        config.edges = o.edges;
    }
    if (!o.me_values.empty()) {
        config.m_e_values = o.me_values;
    }
    config.p = o.p;
    config.trials = o.trials > 0 ? o.trials : 20;
    config.seed = o.seed;
    for (int e : config.edges) {
        if (e < 2) {
            throw ConfigError("--edges values must be at least 2");
        }
    }
    for (int m : config.m_e_values) {
        if (m < 1) {
            throw ConfigError("--me-values must be positive");
        }
    }
    const auto points = benchmark_stages(config);
    Sink sink(o.output, out);
    std::ostream& os = sink.get();
    if (o.format == "json") {
        json rows = json::array();
        for (const BenchPoint& p : points) {
            rows.push_back({{"edge", p.edge},
                            {"m_e", p.m_e},
                            {"trials", p.trials},
                            {"mean_events", p.mean_events},
                            {"tree_seconds", p.tree_seconds},
                            {"match_seconds", p.match_seconds}});
        }
        os << json{{"command", "bench"}, {"p", config.p}, {"seed", config.seed}, {"points", rows}}
                  .dump(2)
           << '\n';
    } else {
        os << "# " << json{{"command", "bench"}, {"p", config.p}, {"seed", config.seed}}.dump()
           << '\n';
        os << bench_csv(points);
    }
    return 0;
}

// ---- plan ----------------------------------------------------------------

int command_plan(const Options& o, std::ostream& out) {
    ApproxMode approx = ApproxMode::kRounded;
    if (o.approx == "exact") {
        approx = ApproxMode::kExact;
    } else if (o.approx != "rounded" && o.approx != "paper") {
        throw ConfigError("--approx must be rounded or exact");
    }
    std::optional<TailFit> fit;
    if (o.alpha > 0.0 || o.beta > 0.0) {
        if (!(o.alpha > 0.0 && o.beta > 0.0)) {
            throw ConfigError("--alpha and --beta must both be positive");
        }
        fit = TailFit{o.alpha, o.beta, 0.0, 0, 0, 0};
    }
    std::optional<std::vector<BenchPoint>> timing;
    if (!o.timing.empty()) {
        timing = parse_bench_csv(read_input(o.timing));
    }
    std::vector<int> rows;
    if (o.me > 0) {
        rows.push_back(o.me);
    } else {
        for (int m = 4; m <= 10; ++m) {
            rows.push_back(m);
        }
    }
    const RegionForm form = o.printed_form ? RegionForm::kPrinted : RegionForm::kFull;
    json out_rows = json::array();
    Sink sink(o.output, out);
    std::ostream& os = sink.get();
    if (o.format != "json") {
        os << "m_e,d,n,p_L,order,I,window_cells,n_solved,t_min_seconds,slower_stage,"
              "extrapolated,window_seconds\n";
    }
    for (int me : rows) {
        const FailureModel model{o.p, 0.0061, me, approx};
        try {
            model.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        std::optional<TimingCurve> curve;
        if (timing) {
            curve = timing_curve(*timing, me);
            if (curve->tree.empty()) {
                curve.reset();
            }
        }
        std::optional<int> n;
        if (o.n > 0) {
            n = o.n;
        } else if (me < 4 || me > 10) {
            throw ConfigError("no tabulated window edge for m_e = " + std::to_string(me) +
                              "; pass --n");
        }
        PlanRow row;
        try {
            row = plan_row(model, n, fit, curve, form);
        } catch (const std::domain_error& e) {
            throw std::runtime_error(std::string("plan: ") + e.what());
        }
        if (o.format == "json") {
            json j = {{"m_e", row.m_e},     {"d", row.d},          {"n", row.n},
                      {"p_L", row.p_L},     {"order", row.order},  {"I", row.instances},
                      {"window_cells", row.window_cells}};
            if (row.n_solved) {
                j["n_solved"] = *row.n_solved;
            }
            if (row.clock) {
                j["t_min_seconds"] = row.clock->t_min;
                j["slower_stage"] = row.clock->slower_stage;
                j["extrapolated"] = row.clock->extrapolated;
                j["window_seconds"] = *row.window_seconds;
            }
            out_rows.push_back(j);
            continue;
        }
        os << row.m_e << ',' << row.d << ',' << row.n << ',' << std::setprecision(3)
           << std::scientific << row.p_L << ',' << std::defaultfloat << std::setprecision(6)
           << row.order << ',' << std::fixed << std::setprecision(3) << row.instances
           << std::defaultfloat << std::setprecision(6) << ',' << row.window_cells << ',';
        if (row.n_solved) {
            os << std::fixed << std::setprecision(2) << *row.n_solved << std::defaultfloat
               << std::setprecision(6);
        }
        os << ',';
        if (row.clock) {
            os << row.clock->t_min << ',' << row.clock->slower_stage << ','
               << (row.clock->extrapolated ? 1 : 0) << ',' << *row.window_seconds;
        } else {
            os << ",,,";
        }
        os << '\n';
    }
    if (o.format == "json") {
        os << json{{"command", "plan"}, {"p", o.p}, {"approx", o.approx}, {"rows", out_rows}}
                  .dump(2)
           << '\n';
    }
    return 0;
}

// ---- option wiring -------------------------------------------------------

std::string env_name(const std::string& flag) {
    std::string s = "LD_";
    for (char c : flag) {
        s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    return app->add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
}

void add_lattice(CLI::App* app, Options& o) {
    flag(app, "dims", o.dims, "lattice size: N or NX,NY,NT");
    flag(app, "p", o.p, "phase error probability per qubit");
    flag(app, "seed", o.seed, "run seed");
}

void add_decoder(CLI::App* app, Options& o) {
    flag(app, "ploss", o.ploss, "loss probability per qubit");
    flag(app, "d", o.d, "code distance; m_e defaults to d/2");
    flag(app, "me", o.me, "maximum edge weight m_e (overrides --d)");
    flag(app, "n", o.n, "window edge (default: tabulated n(m_e))");
    flag(app, "trials", o.trials, "number of trials");
    flag(app, "jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    flag(app, "baseline", o.baseline, "initial parity baseline: even or random");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    o.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    CLI::App app{"Cluster-state decoder toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "tcq 0.1.0");

    CLI::App* simulate = app.add_subcommand("simulate", "sample errors and write detection events");
    add_lattice(simulate, o);
    flag(simulate, "ploss", o.ploss, "loss probability per qubit");
    flag(simulate, "baseline", o.baseline, "initial parity baseline: even or random");
    flag(simulate, "emit", o.emit, "events or stream");
    flag(simulate, "output", o.output, "output file (default stdout)");

    CLI::App* decode = app.add_subcommand("decode", "decode an event file or run Monte Carlo trials");
    add_lattice(decode, o);
    add_decoder(decode, o);
    flag(decode, "mode", o.mode, "global, parallel or both");
    flag(decode, "input", o.input, "event or stream file to decode ('-' for stdin)");
    flag(decode, "format", o.format, "csv or json");
    flag(decode, "output", o.output, "output file (default stdout)");
    flag(decode, "summary", o.summary, "write the JSON summary here");
    decode->add_flag("--through-stream", o.through_stream,
                     "generate detector streams and run the streaming accumulator per trial")
        ->envname("LD_THROUGH_STREAM");

    CLI::App* verify = app.add_subcommand("verify", "parallel vs global and blossom vs brute force");
    add_lattice(verify, o);
    add_decoder(verify, o);
    o.mode = "both";
    flag(verify, "mode", o.mode, "decode mode for the equivalence harness");
    flag(verify, "oracle-trials", o.oracle_trials, "random instances for the oracle check");
    flag(verify, "format", o.format, "csv or json");
    flag(verify, "output", o.output, "output file (default stdout)");

    CLI::App* components = app.add_subcommand("components", "component extent histogram and fit");
    add_lattice(components, o);
    flag(components, "d", o.d, "code distance; m_e defaults to d/2");
    flag(components, "me", o.me, "maximum edge weight m_e");
    flag(components, "trials", o.trials, "number of trials");
    flag(components, "jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    flag(components, "format", o.format, "csv or json");
    flag(components, "output", o.output, "output file (default stdout)");
    flag(components, "dump", o.dump, "write every component as CSV rows here");

    CLI::App* bench = app.add_subcommand("bench", "time tree creation and matching");
    flag(bench, "p", o.p, "phase error probability per qubit");
    flag(bench, "seed", o.seed, "run seed");
    flag(bench, "trials", o.trials, "trials per point");
    std::string edges_text;
    std::string me_text;
    flag(bench, "edges", edges_text, "volume edge lengths, comma separated");
    flag(bench, "me-values", me_text, "m_e values, comma separated");
    flag(bench, "format", o.format, "csv or json");
    flag(bench, "output", o.output, "output file (default stdout)");

    CLI::App* plan = app.add_subcommand("plan", "failure, window and clock planning rows");
    flag(plan, "me", o.me, "single m_e (default: 4..10)");
    flag(plan, "n", o.n, "window edge (default: tabulated)");
    flag(plan, "p", o.p, "physical error rate");
    flag(plan, "alpha", o.alpha, "tail fit amplitude");
    flag(plan, "beta", o.beta, "tail fit decay rate");
    flag(plan, "timing", o.timing, "bench CSV used for T_min");
    flag(plan, "approx", o.approx, "rounded (10^-2m_e) or exact single-layer failure");
    plan->add_flag("--printed-form", o.printed_form, "use the printed 0.15 alpha constant")
        ->envname("LD_PRINTED_FORM");
    flag(plan, "format", o.format, "csv or json");
    flag(plan, "output", o.output, "output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (!edges_text.empty()) {
            o.edges = parse_int_list(edges_text, "--edges");
        }
        if (!me_text.empty()) {
            o.me_values = parse_int_list(me_text, "--me-values");
        }
        if (o.format != "csv" && o.format != "json") {
            throw ConfigError("--format must be csv or json");
        }
        if (simulate->parsed()) {
            return command_simulate(o, out);
        }
        if (decode->parsed()) {
            return command_decode(o, out);
        }
        if (verify->parsed()) {
            return command_verify(o, out);
        }
        if (components->parsed()) {
            return command_components(o, out);
        }
        if (bench->parsed()) {
            return command_bench(o, out);
        }
        if (plan->parsed()) {
            return command_plan(o, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace tcq::cli
