#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prokit/document.hpp"
#include "prokit/generate.hpp"
#include "prokit/invert.hpp"
#include "prokit/realize.hpp"
#include "prokit/spectra.hpp"

using nlohmann::ordered_json;
using namespace prokit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;

struct CommonOpts {
    std::string input;
    std::string json_path;
    ToleranceConfig tol;
    std::uint64_t seed = kDefaultSampleSeed;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_input = true) {
    if (with_input) cmd->add_option("input", o.input, "input document path")->required();
    cmd->add_option("--json", o.json_path, "write a machine-readable JSON copy to this path");
    cmd->add_option("--tol-rank", o.tol.rank_rel, "relative SVD rank threshold");
    cmd->add_option("--tol-psd", o.tol.psd_abs, "eigenvalue floor for PSD tests");
    cmd->add_option("--tol-eq", o.tol.eq_rel, "relative matrix-equality threshold");
    cmd->add_option("--seed", o.seed, "seed for sampling / generation");
}

void emit(const CommonOpts& o, const ordered_json& j) {
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path);
        if (!out) throw ParseError("cannot write '" + o.json_path + "'");
        out << text;
    }
}

void emit_document(const CommonOpts& o, const DocumentEnvelope& doc) {
    const std::string text = serialize_document(doc);
    std::cout << text;
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path);
        if (!out) throw ParseError("cannot write '" + o.json_path + "'");
        out << text;
    }
}

MatrixFunction evaluator(const DocumentEnvelope& doc, const ToleranceConfig& tol) {
    switch (doc.kind) {
        case DocumentKind::foster:
            return [f = *doc.foster, tol](Complex z) { return eval_foster(f, z, tol); };
        case DocumentKind::state_space:
            return [r = *doc.state_space, tol](Complex z) { return eval_state_space(r, z, tol); };
        case DocumentKind::descriptor:
            return [d = *doc.descriptor, tol](Complex z) { return eval_descriptor(d, z, tol); };
    }
    throw DomainError("unknown document kind");
}

StateSpaceRealization as_state_space(const DocumentEnvelope& doc, const ToleranceConfig& tol) {
    if (doc.kind == DocumentKind::state_space) return *doc.state_space;
    if (doc.kind == DocumentKind::foster) return foster_to_state_space(*doc.foster, tol);
    throw DomainError("this command needs a foster or state_space document");
}

void print_violations(const ValidationReport& rep) {
    for (const auto& v : rep.violations) {
        std::printf("  violated: %s at %s (residual %.3e)\n", v.condition.c_str(),
                    v.location.c_str(), v.residual);
    }
}

Complex parse_probe(const std::string& s) {
    // accepts "re", "re,im", "re+imi", "re-imi", "imi"
    std::string t = s;
    const auto comma = t.find(',');
    try {
        if (comma != std::string::npos) {
            return {std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1))};
        }
        if (!t.empty() && (t.back() == 'i' || t.back() == 'j')) {
            t.pop_back();
            std::size_t split = t.find_last_of("+-");
            if (split == std::string::npos || split == 0) {
                return {0.0, t.empty() || t == "+" ? 1.0 : (t == "-" ? -1.0 : std::stod(t))};
            }
            return {std::stod(t.substr(0, split)), std::stod(t.substr(split))};
        }
        return {std::stod(t), 0.0};
    } catch (const std::exception&) {
        throw ParseError("cannot parse probe point '" + s + "' (use re, re,im or re+imi)");
    }
}

ordered_json complex_to_json(Complex z) {
    ordered_json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

ordered_json points_to_json(const std::vector<SpectralPoint>& pts) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : pts) {
        ordered_json e;
        if (p.at_infinity()) {
            e["omega"] = "inf";
        } else {
            e["omega"] = p.omega;
        }
        e["multiplicity"] = p.multiplicity;
        arr.push_back(std::move(e));
    }
    return arr;
}

void print_points(const char* label, const std::vector<SpectralPoint>& pts) {
    std::printf("%s:\n", label);
    for (const auto& p : pts) {
        if (p.at_infinity()) {
            std::printf("  omega =      inf  multiplicity %lld\n",
                        static_cast<long long>(p.multiplicity));
        } else {
            std::printf("  omega = %.6f  multiplicity %lld\n", p.omega,
                        static_cast<long long>(p.multiplicity));
        }
    }
}

int cmd_validate(const CommonOpts& o) {
    const DocumentEnvelope doc = load_document(o.input);
    ValidationReport structural;
    if (doc.kind == DocumentKind::foster) {
        structural = validate_foster(*doc.foster, o.tol);
    } else if (doc.kind == DocumentKind::state_space) {
        structural = validate_realization(*doc.state_space, o.tol);
    } else {
        if (!pencil_regular_sampling(doc.descriptor->E, doc.descriptor->A, o.tol)) {
            structural.fail("regular pencil", "(E, A)", 0.0);
        }
    }
    const MatrixFunction f = evaluator(doc, o.tol);
    const SampleSet samples = default_pro_samples(f, o.seed);
    const ValidationReport sampled = check_pro_sampling(f, samples.half_plane, samples.axis, o.tol);

    const bool passed = structural.passed && sampled.passed;
    std::printf("structural check: %s\n", structural.passed ? "passed" : "FAILED");
    print_violations(structural);
    std::printf("sampling check (necessary conditions, seed %llu): %s\n",
                static_cast<unsigned long long>(samples.seed), sampled.passed ? "passed" : "FAILED");
    print_violations(sampled);
    std::printf("verdict: %s\n", passed ? "passed" : "FAILED");

    if (!o.json_path.empty()) {
        ordered_json j;
        j["structural"] = report_to_json(structural);
        j["sampling"] = report_to_json(sampled);
        j["seed"] = samples.seed;
        j["passed"] = passed;
        std::ofstream out(o.json_path);
        if (!out) throw ParseError("cannot write '" + o.json_path + "'");
        out << j.dump(2) << "\n";
    }
    return passed ? kExitOk : kExitDomain;
}

int cmd_convert(const CommonOpts& o, const std::string& to) {
    const DocumentEnvelope doc = load_document(o.input);
    ordered_json meta;
    meta["converted_from"] = to_string(doc.kind);
    if (to == "foster") {
        const FosterForm f = state_space_to_foster(as_state_space(doc, o.tol), o.tol);
        emit_document(o, DocumentEnvelope::wrap(f, meta));
    } else if (to == "ss") {
        StateSpaceRealization r;
        if (doc.kind == DocumentKind::foster) {
            r = foster_to_state_space(*doc.foster, o.tol);
        } else if (doc.kind == DocumentKind::state_space) {
            r = *doc.state_space;
        } else {
            throw DomainError("convert: descriptor input is not supported");
        }
        emit_document(o, DocumentEnvelope::wrap(r, meta));
    } else if (to == "weierstrass") {
        const DescriptorRealization d =
            state_space_to_weierstrass(as_state_space(doc, o.tol), o.tol);
        emit_document(o, DocumentEnvelope::wrap(d, meta));
    } else {
        throw ParseError("unknown conversion target '" + to + "' (foster|ss|weierstrass)");
    }
    return kExitOk;
}

int cmd_invert(const CommonOpts& o, const std::string& form) {
    const DocumentEnvelope doc = load_document(o.input);
    const StateSpaceRealization r = as_state_space(doc, o.tol);
    ordered_json meta;
    meta["inverse_of"] = o.input;
    meta["form"] = form;
    try {
        if (form == "raw") {
            emit_document(o, DocumentEnvelope::wrap(inverse_descriptor_raw(r, o.tol), meta));
        } else if (form == "minimal") {
            const auto dec = decompose_input_space(r.M, r.D, r.B, o.tol);
            const auto inv = inverse_descriptor_minimal(r, dec, o.tol);
            emit_document(o, DocumentEnvelope::wrap(inv.descriptor(), meta));
        } else if (form == "weierstrass") {
            const auto dec = decompose_input_space(r.M, r.D, r.B, o.tol);
            emit_document(o, DocumentEnvelope::wrap(inverse_weierstrass(r, dec, o.tol), meta));
        } else if (form == "ss") {
            emit_document(o, DocumentEnvelope::wrap(inverse_state_space(r, o.tol), meta));
        } else {
            throw ParseError("unknown inverse form '" + form + "' (raw|minimal|weierstrass|ss)");
        }
    } catch (const NotInvertibleError& e) {
        std::fprintf(stderr, "error: %s\nkernel witness:", e.what());
        for (Index i = 0; i < e.witness().size(); ++i) {
            std::fprintf(stderr, " %.12g", e.witness()(i));
        }
        std::fprintf(stderr, "\n");
        return kExitDomain;
    }
    return kExitOk;
}

int cmd_polezero(const CommonOpts& o) {
    const DocumentEnvelope doc = load_document(o.input);
    const StateSpaceRealization r = as_state_space(doc, o.tol);
    const PoleZeroReport rep = pole_zero_report(r, o.tol);
    print_points("poles", rep.poles);
    print_points("zeros", rep.zeros);
    if (!o.json_path.empty()) {
        ordered_json j;
        j["m"] = rep.m;
        j["poles"] = points_to_json(rep.poles);
        j["zeros"] = points_to_json(rep.zeros);
        std::ofstream out(o.json_path);
        if (!out) throw ParseError("cannot write '" + o.json_path + "'");
        out << j.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_interlace(const CommonOpts& o) {
    const DocumentEnvelope doc = load_document(o.input);
    const StateSpaceRealization r = as_state_space(doc, o.tol);
    const InterlaceReport rep = interlace_verify(r, o.tol);
    std::printf("split: m1 = %lld, m2 = %lld, m3 = %lld\n", static_cast<long long>(rep.m1),
                static_cast<long long>(rep.m2), static_cast<long long>(rep.m3));
    std::printf("spectrum of iA      (%zu):", rep.eigs_A.size());
    for (double x : rep.eigs_A) std::printf(" %.6f", x);
    std::printf("\nspectrum of iA_inv  (%zu):", rep.eigs_Ainv.size());
    for (double x : rep.eigs_Ainv) std::printf(" %.6f", x);
    std::printf("\nchecked %zu indexed inequalities: %s\n", rep.inequality_results.size(),
                rep.all_hold ? "all hold" : "VIOLATIONS FOUND");
    for (const auto& iq : rep.inequality_results) {
        if (!iq.holds) {
            std::printf("  violated: family %d at j = %d (slack %.3e)\n",
                        static_cast<int>(iq.family), iq.j, iq.slack);
        }
    }
    if (!o.json_path.empty()) {
        ordered_json j;
        j["m1"] = rep.m1;
        j["m2"] = rep.m2;
        j["m3"] = rep.m3;
        j["eigs_A"] = rep.eigs_A;
        j["eigs_Ainv"] = rep.eigs_Ainv;
        j["all_hold"] = rep.all_hold;
        ordered_json arr = ordered_json::array();
        for (const auto& iq : rep.inequality_results) {
            ordered_json e;
            e["j"] = iq.j;
            e["family"] = static_cast<int>(iq.family);
            e["holds"] = iq.holds;
            e["slack"] = iq.slack;
            arr.push_back(std::move(e));
        }
        j["inequalities"] = std::move(arr);
        std::ofstream out(o.json_path);
        if (!out) throw ParseError("cannot write '" + o.json_path + "'");
        out << j.dump(2) << "\n";
    }
    return rep.all_hold ? kExitOk : kExitDomain;
}

int cmd_eval(const CommonOpts& o, const std::vector<std::string>& at) {
    const DocumentEnvelope doc = load_document(o.input);
    const MatrixFunction f = evaluator(doc, o.tol);
    ordered_json results = ordered_json::array();
    for (const auto& s : at) {
        const Complex z = parse_probe(s);
        const ComplexMatrix F = f(z);
        std::printf("F(%.6g%+.6gi) =\n", z.real(), z.imag());
        for (Index i = 0; i < F.rows(); ++i) {
            std::printf(" ");
            for (Index j = 0; j < F.cols(); ++j) {
                std::printf(" %.10g%+.10gi", F(i, j).real(), F(i, j).imag());
            }
            std::printf("\n");
        }
        ordered_json entry;
        entry["z"] = complex_to_json(z);
        ordered_json rows = ordered_json::array();
        for (Index i = 0; i < F.rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (Index j = 0; j < F.cols(); ++j) row.push_back(complex_to_json(F(i, j)));
            rows.push_back(std::move(row));
        }
        entry["value"] = std::move(rows);
        results.push_back(std::move(entry));
    }
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path);
        if (!out) throw ParseError("cannot write '" + o.json_path + "'");
        out << results.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_generate(const CommonOpts& o, Index m, Index terms) {
    GeneratorOptions opts;
    opts.m = m;
    opts.terms = terms;
    opts.seed = o.seed;
    const FosterForm f = random_foster(opts);
    ordered_json meta;
    meta["generator"] = "pro-kit generate";
    meta["seed"] = opts.seed;
    meta["m"] = m;
    meta["terms"] = terms;
    emit_document(o, DocumentEnvelope::wrap(f, meta));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pro-kit: positive-real-odd rational matrix function toolkit"};
    app.require_subcommand(1);

    CommonOpts o_validate, o_convert, o_invert, o_polezero, o_interlace, o_eval, o_generate;
    std::string convert_to, invert_form = "ss";
    std::vector<std::string> eval_at;
    Index gen_m = 2, gen_terms = 3;

    auto* validate = app.add_subcommand("validate", "check the defining conditions of a document");
    add_common(validate, o_validate);

    auto* convert = app.add_subcommand("convert", "convert between representations");
    add_common(convert, o_convert);
    convert->add_option("--to", convert_to, "target form: foster|ss|weierstrass")->required();

    auto* invert = app.add_subcommand("invert", "realize the inverse function");
    add_common(invert, o_invert);
    invert->add_option("--form", invert_form, "raw|minimal|weierstrass|ss");

    auto* polezero = app.add_subcommand("polezero", "pole and zero locations with multiplicities");
    add_common(polezero, o_polezero);

    auto* interlace = app.add_subcommand("interlace", "verify the eigenvalue interlacing bounds");
    add_common(interlace, o_interlace);

    auto* eval = app.add_subcommand("eval", "evaluate the function at probe points");
    add_common(eval, o_eval);
    eval->add_option("--at", eval_at, "probe points (re, re,im or re+imi)")->required();

    auto* generate = app.add_subcommand("generate", "random valid Foster document");
    add_common(generate, o_generate, false);
    generate->add_option("--m", gen_m, "port count");
    generate->add_option("--terms", gen_terms, "number of partial-fraction terms");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(o_validate);
        if (convert->parsed()) return cmd_convert(o_convert, convert_to);
        if (invert->parsed()) return cmd_invert(o_invert, invert_form);
        if (polezero->parsed()) return cmd_polezero(o_polezero);
        if (interlace->parsed()) return cmd_interlace(o_interlace);
        if (eval->parsed()) return cmd_eval(o_eval, eval_at);
        if (generate->parsed()) return cmd_generate(o_generate, gen_m, gen_terms);
    } catch (const ParseError& e) {
        if (e.byte() >= 0) {
            std::fprintf(stderr, "parse error at byte %td: %s\n", e.byte(), e.what());
        } else {
            std::fprintf(stderr, "error: %s\n", e.what());
        }
        return kExitParse;
    } catch (const ValidationFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        print_violations(e.report());
        return kExitDomain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    }
    return kExitOk;
}
