#include "framecast/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace framecast {

namespace {

using nlohmann::json;

json tagged(double value, Provenance p) {
    return json{{"value", value}, {"provenance", to_string(p)}};
}

json bounds_json(const FrameBounds& b) {
    return json{{"lower", tagged(b.lower, b.provenance)},
                {"upper", tagged(b.upper, b.provenance)}};
}

json hypothesis_json(const std::vector<HypothesisCheck>& checks) {
    json out = json::array();
    for (const auto& h : checks) {
        out.push_back({{"name", h.name}, {"pass", h.pass}, {"magnitude", h.magnitude}});
    }
    return out;
}

json report_skeleton(const char* cmd, const SpecFile& spec, const CommandOptions& opts) {
    json r;
    r["command"] = opts.command_echo.empty() ? cmd : opts.command_echo;
    r["subcommand"] = cmd;
    r["input"] = spec.path;
    r["digest"] = spec.digest;
    r["tol"] = opts.tol;
    r["seed"] = opts.seed;
    if (!spec.reference.is_null()) r["reference"] = spec.reference;
    return r;
}

std::string human_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

template <typename T>
const T* payload_as(const SpecFile& spec, const char* expected) {
    const T* p = std::get_if<T>(&spec.payload);
    if (!p) {
        throw InvalidArgument(std::string("spec kind \"") + spec.kind() + "\" not usable here (expected " +
                              expected + ")");
    }
    return p;
}

void append_reference(std::ostringstream& os, const SpecFile& spec) {
    if (spec.reference.is_null()) return;
    os << "reference figures (from spec file, displayed only):\n";
    for (auto it = spec.reference.begin(); it != spec.reference.end(); ++it) {
        os << "  " << it.key() << " = " << it.value().dump() << "\n";
    }
}

}  // namespace

double Monomial::eval(double tau) const { return coeff * std::pow(tau, static_cast<double>(power)); }

Monomial parse_monomial(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw ParseError("empty kernel monomial");
    Monomial m;
    const std::size_t t_pos = s.find('t');
    std::string coeff_part = t_pos == std::string::npos ? s : s.substr(0, t_pos);
    if (!coeff_part.empty() && coeff_part.back() == '*') coeff_part.pop_back();
    if (coeff_part.empty()) {
        m.coeff = 1.0;
    } else if (coeff_part == "-") {
        m.coeff = -1.0;
    } else if (coeff_part == "+") {
        m.coeff = 1.0;
    } else {
        std::size_t used = 0;
        try {
            m.coeff = std::stod(coeff_part, &used);
        } catch (const std::exception&) {
            throw ParseError("bad kernel monomial \"" + text + "\"");
        }
        if (used != coeff_part.size()) throw ParseError("bad kernel monomial \"" + text + "\"");
    }
    if (t_pos == std::string::npos) {
        m.power = 0;
        return m;
    }
    std::string tail = s.substr(t_pos + 1);
    if (tail.empty()) {
        m.power = 1;
    } else if (tail[0] == '^') {
        try {
            m.power = static_cast<unsigned>(std::stoul(tail.substr(1)));
        } catch (const std::exception&) {
            throw ParseError("bad kernel monomial exponent in \"" + text + "\"");
        }
    } else {
        throw ParseError("bad kernel monomial \"" + text + "\"");
    }
    return m;
}

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CommandResult cmd_bounds(const SpecFile& spec, const CommandOptions& opts) {
    const VectorSystem* sys = payload_as<VectorSystem>(spec, "vector_system");
    const FrameVerdict verdict = is_frame(*sys, opts.tol);

    CommandResult res;
    res.report = report_skeleton("bounds", spec, opts);
    res.report["kind"] = "bounds";
    res.report["dim"] = sys->dim;
    res.report["vector_count"] = sys->vectors.size();
    res.report["bounds"] = bounds_json(verdict.bounds);
    res.report["frame"] = verdict.frame;
    res.report["bessel"] = true;  // automatic for finite systems
    res.exit_code = verdict.frame ? 0 : 2;

    std::ostringstream os;
    os << "system: " << sys->vectors.size() << " vectors in R^" << sys->dim << "\n"
       << "lower frame bound (Measured): " << human_number(verdict.bounds.lower) << "\n"
       << "upper frame bound (Measured): " << human_number(verdict.bounds.upper) << "\n"
       << "frame: " << (verdict.frame ? "yes" : "no") << " (Bessel: yes)\n";
    append_reference(os, spec);
    res.human = os.str();
    return res;
}

CommandResult cmd_l2g(const SpecFile& spec, const CommandOptions& opts) {
    const LocalSystemSpec* ls = payload_as<LocalSystemSpec>(spec, "local_system");
    const L1Certificate cert = theorem_l1_check(ls->partition, ls->local, opts.tol);

    // Companion check through the operator-family route with T_j = P_j.
    ProjectorFamily fam = ls->partition.family(opts.tol);
    OperatorFamily ops;
    ops.dim = ls->partition.dim;
    for (const Projector& p : fam.members) ops.members.push_back(p.matrix());
    const PropOfCertificate prop = verify_prop_of(ops, ls->local, opts.tol);

    CommandResult res;
    res.report = report_skeleton("l2g", spec, opts);
    res.report["kind"] = "l2g";
    res.report["local_uniform"] = bounds_json(cert.local_uniform);
    res.report["sum_l1"] = tagged(cert.sum_l1, Provenance::Measured);
    res.report["sum_l1_sq"] = tagged(cert.sum_l1_sq, Provenance::Measured);
    json envs = json::array();
    for (const auto& env : cert.envelopes) {
        json values = json::object();
        for (const auto& [m, v] : env.values) values[std::to_string(m)] = v;
        envs.push_back({{"k", env.k}, {"values", values}, {"l1", env.l1}});
    }
    res.report["envelopes"] = envs;
    res.report["predicted_statement"] =
        cert.predicted_statement ? bounds_json(*cert.predicted_statement) : json();
    res.report["predicted_proof"] = cert.predicted_proof ? bounds_json(*cert.predicted_proof) : json();
    res.report["statement_brackets"] = cert.statement_brackets;
    res.report["proof_brackets"] = cert.proof_brackets;
    res.report["measured"] = bounds_json(cert.measured);
    res.report["hypotheses"] = hypothesis_json(cert.hypothesis_report);
    res.report["verdict"] = to_string(cert.verdict);
    res.report["operator_route"] = {{"fusion", bounds_json(prop.fusion)},
                                    {"local_uniform", bounds_json(prop.local_uniform)},
                                    {"predicted", prop.predicted ? bounds_json(*prop.predicted) : json()},
                                    {"measured", bounds_json(prop.measured)},
                                    {"verdict", to_string(prop.verdict)}};
    res.exit_code = cert.verdict == GlueVerdict::Certified ? 0 : 2;

    std::ostringstream os;
    os << "uniform local bounds: alpha = " << human_number(cert.local_uniform.lower)
       << ", beta = " << human_number(cert.local_uniform.upper) << "\n"
       << "sum of envelope l1 norms: " << human_number(cert.sum_l1)
       << " (sum of squares: " << human_number(cert.sum_l1_sq) << ")\n";
    if (cert.predicted_statement) {
        os << "predicted bounds (statement form): [" << human_number(cert.predicted_statement->lower)
           << ", " << human_number(cert.predicted_statement->upper) << "]"
           << (cert.statement_brackets ? " brackets measured" : " does NOT bracket measured") << "\n";
    } else {
        os << "predicted bounds (statement form): condition failed\n";
    }
    if (cert.predicted_proof) {
        os << "predicted bounds (derivation form): [" << human_number(cert.predicted_proof->lower)
           << ", " << human_number(cert.predicted_proof->upper) << "]"
           << (cert.proof_brackets ? " brackets measured" : " does NOT bracket measured") << "\n";
    } else {
        os << "predicted bounds (derivation form): condition failed\n";
    }
    os << "measured bounds: [" << human_number(cert.measured.lower) << ", "
       << human_number(cert.measured.upper) << "]\n";
    for (const auto& h : cert.hypothesis_report) {
        os << "hypothesis " << h.name << ": " << (h.pass ? "pass" : "fail") << " (magnitude "
           << human_number(h.magnitude) << ")\n";
    }
    os << "verdict: " << to_string(cert.verdict) << "\n";
    append_reference(os, spec);
    res.human = os.str();
    return res;
}

CommandResult cmd_ds(const SpecFile& spec, const CommandOptions& opts, const DsOptions& ds) {
    const DSSystemSpec* parsed = payload_as<DSSystemSpec>(spec, "ds_system");
    DSSystemSpec effective = *parsed;
    if (ds.convention_override) {
        effective.convention = *ds.convention_override;
        effective.stride_override.reset();
    }
    const DSReport report = ds_check(effective, ds.blocks, opts.tol, ds.variant);

    CommandResult res;
    res.report = report_skeleton("ds", spec, opts);
    res.report["kind"] = "ds";
    res.report["window_len"] = effective.window_len;
    res.report["omega"] = effective.omega;
    res.report["iterations"] = effective.iterations;
    res.report["convention"] = to_string(effective.convention);
    res.report["stride"] = effective.stride();
    res.report["truncation_blocks"] = report.truncation_blocks;
    res.report["local_bounds"] = bounds_json(report.local_bounds);
    res.report["lambda_min"] = tagged(report.local_bounds.lower, Provenance::Measured);
    res.report["sigma_min"] = tagged(report.sigma_min, Provenance::Measured);
    res.report["det_phi"] = report.det_phi ? json(tagged(*report.det_phi, Provenance::Measured)) : json();
    res.report["gamma_l2"] = tagged(report.gamma_l2, Provenance::Measured);
    res.report["gamma_l1"] = tagged(report.gamma_l1, Provenance::Measured);
    res.report["gamma_variant"] = to_string(report.variant);
    res.report["gamma_selected"] = tagged(report.gamma_selected, Provenance::Measured);
    res.report["predicted"] = report.predicted ? bounds_json(*report.predicted) : json();
    res.report["measured_interior"] = bounds_json(report.measured);
    res.report["full_truncation"] = bounds_json(report.full_bounds);
    res.report["verdict"] = to_string(report.verdict);
    res.exit_code = report.verdict == GlueVerdict::Certified ? 0 : 2;

    std::ostringstream os;
    os << "window system: " << effective.omega.size() * (effective.iterations + 1) << " vectors in R^"
       << effective.window_len << " (" << to_string(effective.convention) << ", stride "
       << effective.stride() << ")\n"
       << "local bounds: alpha = " << human_number(report.local_bounds.lower)
       << ", beta = " << human_number(report.local_bounds.upper) << "\n"
       << "lambda_min = " << human_number(report.local_bounds.lower)
       << ", sigma_min = " << human_number(report.sigma_min);
    if (report.det_phi) os << ", det(Phi) = " << human_number(*report.det_phi);
    os << "\n"
       << "gamma_l2 = " << human_number(report.gamma_l2)
       << ", gamma_l1 = " << human_number(report.gamma_l1) << " (selected: "
       << to_string(report.variant) << " = " << human_number(report.gamma_selected) << ")\n";
    if (report.predicted) {
        os << "predicted global bounds: [" << human_number(report.predicted->lower) << ", "
           << human_number(report.predicted->upper) << "]\n";
    } else {
        os << "predicted global bounds: none (gamma >= alpha)\n";
    }
    os << "measured (interior of " << report.truncation_blocks
       << "-block truncation): [" << human_number(report.measured.lower) << ", "
       << human_number(report.measured.upper) << "]\n"
       << "measured (full truncation): [" << human_number(report.full_bounds.lower) << ", "
       << human_number(report.full_bounds.upper) << "]\n"
       << "verdict: " << to_string(report.verdict) << "\n";
    append_reference(os, spec);
    res.human = os.str();
    return res;
}

CommandResult cmd_sweep(const SweepOptions& sweep, const CommandOptions& opts) {
    if (!(sweep.tau_from > 0.0) || !(sweep.tau_from <= sweep.tau_to) || !(sweep.tau_step > 0.0)) {
        throw InvalidArgument("sweep: need 0 < tau-from <= tau-to and step > 0");
    }
    if (sweep.out_csv.empty()) throw InvalidArgument("sweep: --out path required");

    std::vector<Monomial> monomials;
    monomials.reserve(sweep.kernel_monomials.size());
    for (const std::string& m : sweep.kernel_monomials) monomials.push_back(parse_monomial(m));

    std::ofstream csv(sweep.out_csv, std::ios::binary);
    if (!csv) throw IoError("sweep: cannot open output file " + sweep.out_csv);
    csv << "tau,det_phi,lambda_min,sigma_min,gamma_l1,gamma_l2,cond_l1,cond_l2\n";

    std::optional<double> first_fail_l1;
    std::optional<double> first_fail_l2;
    std::size_t row_count = 0;

    for (double tau = sweep.tau_from; tau <= sweep.tau_to + 0.5 * sweep.tau_step;
         tau += sweep.tau_step) {
        Vec coeffs;
        coeffs.reserve(monomials.size());
        for (const Monomial& m : monomials) coeffs.push_back(m.eval(tau));

        DSSystemSpec spec;
        spec.kernel = SupportedVector(sweep.kernel_offset, coeffs);
        spec.window_len = sweep.window_len;
        spec.omega = sweep.omega;
        spec.iterations = sweep.iterations;
        spec.convention = sweep.convention;
        spec.validate();

        const VectorSystem local = ds_local_system(spec);
        const FrameBounds fb = frame_bounds(local, opts.tol);
        const double lambda_min = fb.lower;
        const double sigma_min = std::sqrt(std::max(0.0, lambda_min));
        const double det_phi = local.vectors.size() == local.dim
                                   ? determinant(analysis_matrix(local))
                                   : std::numeric_limits<double>::quiet_NaN();
        const GammaPair g = gamma(spec);
        const bool cond_l1 = g.l1 < lambda_min;
        const bool cond_l2 = g.l2 < lambda_min;
        if (!cond_l1 && !first_fail_l1) first_fail_l1 = tau;
        if (!cond_l2 && !first_fail_l2) first_fail_l2 = tau;

        csv << format_g17(tau) << ',' << format_g17(det_phi) << ',' << format_g17(lambda_min)
            << ',' << format_g17(sigma_min) << ',' << format_g17(g.l1) << ',' << format_g17(g.l2)
            << ',' << (cond_l1 ? 1 : 0) << ',' << (cond_l2 ? 1 : 0) << "\n";
        ++row_count;
    }
    csv.flush();
    if (!csv) throw IoError("sweep: failed writing " + sweep.out_csv);

    CommandResult res;
    res.report["command"] = opts.command_echo.empty() ? "sweep" : opts.command_echo;
    res.report["subcommand"] = "sweep";
    res.report["tol"] = opts.tol;
    res.report["seed"] = opts.seed;
    res.report["kind"] = "sweep";
    res.report["csv"] = sweep.out_csv;
    res.report["rows"] = row_count;
    res.report["kernel"] = sweep.kernel_monomials;
    res.report["window_len"] = sweep.window_len;
    res.report["omega"] = sweep.omega;
    res.report["iterations"] = sweep.iterations;
    res.report["convention"] = to_string(sweep.convention);
    res.report["cond_l1_first_fail_tau"] = first_fail_l1 ? json(*first_fail_l1) : json();
    res.report["cond_l2_first_fail_tau"] = first_fail_l2 ? json(*first_fail_l2) : json();
    res.exit_code = 0;

    std::ostringstream os;
    os << "wrote " << row_count << " rows to " << sweep.out_csv << "\n";
    if (first_fail_l1) {
        os << "condition gamma_l1 < lambda_min first fails at tau = " << human_number(*first_fail_l1)
           << "\n";
    } else {
        os << "condition gamma_l1 < lambda_min holds for the whole sweep range\n";
    }
    if (first_fail_l2) {
        os << "condition gamma_l2 < lambda_min first fails at tau = " << human_number(*first_fail_l2)
           << "\n";
    } else {
        os << "condition gamma_l2 < lambda_min holds for the whole sweep range\n";
    }
    res.human = os.str();
    return res;
}

CommandResult cmd_fusion(const SpecFile& spec, const CommandOptions& opts,
                         const FusionOptions& fusion) {
    const ProjectorFamilySpec* pf = payload_as<ProjectorFamilySpec>(spec, "projector_family");
    const ProjectorFamily fam = pf->family(opts.tol);

    const FrameBounds bounds = fusion_bounds(fam, opts.tol);
    const bool complete = is_complete(fam, opts.tol);
    const BandedCommutingVerdict banded = check_banded_commuting(fam, fusion.band, opts.tol);

    CommandResult res;
    res.report = report_skeleton("fusion", spec, opts);
    res.report["kind"] = "fusion";
    res.report["member_count"] = fam.members.size();
    res.report["band"] = fusion.band;
    res.report["fusion_bounds"] = bounds_json(bounds);
    res.report["complete"] = complete;
    json violations = json::array();
    for (const auto& v : banded.violations) {
        violations.push_back({{"j", v.j},
                              {"k", v.k},
                              {"kind", v.kind == PairViolation::Kind::NonCommuting
                                           ? "non_commuting"
                                           : "nonzero_product"},
                              {"magnitude", v.magnitude}});
    }
    res.report["banded_commuting"] = {{"pass", banded.pass}, {"violations", violations}};

    std::ostringstream os;
    os << "family: " << fam.members.size() << " projectors on R^" << fam.dim << "\n"
       << "fusion bounds (Measured): [" << human_number(bounds.lower) << ", "
       << human_number(bounds.upper) << "]\n"
       << "complete: " << (complete ? "yes" : "no") << "\n"
       << "banded/commuting check (band " << fusion.band << "): "
       << (banded.pass ? "pass" : "fail") << "\n";
    for (const auto& v : banded.violations) {
        os << "  violation (" << v.j << "," << v.k << "): "
           << (v.kind == PairViolation::Kind::NonCommuting ? "non-commuting" : "nonzero product")
           << " magnitude " << human_number(v.magnitude) << "\n";
    }

    bool q_ok = true;
    if (fusion.emit_q) {
        try {
            const ProjectorFamily q = disjointify(fam, opts.tol);
            json q_json = json::array();
            double max_cross = 0.0, max_idem = 0.0, max_asym = 0.0;
            for (std::size_t a = 0; a < q.members.size(); ++a) {
                const Matrix& qa = q.members[a].matrix();
                max_idem = std::max(max_idem, (qa * qa).max_abs_diff(qa));
                max_asym = std::max(max_asym, qa.asymmetry());
                for (std::size_t b = 0; b < q.members.size(); ++b) {
                    if (a == b) continue;
                    max_cross = std::max(max_cross, (qa * q.members[b].matrix()).max_abs());
                }
                json rows = json::array();
                for (std::size_t i = 0; i < qa.rows(); ++i) rows.push_back(qa.row(i));
                q_json.push_back(rows);
            }
            res.report["q_family"] = {{"members", q_json},
                                      {"max_cross_product", max_cross},
                                      {"max_idempotency_residual", max_idem},
                                      {"max_asymmetry", max_asym}};
            os << "Q family emitted: max cross product " << human_number(max_cross)
               << ", max idempotency residual " << human_number(max_idem) << ", max asymmetry "
               << human_number(max_asym) << "\n";
        } catch (const HypothesisViolated& e) {
            q_ok = false;
            res.report["q_family"] = {{"error", e.what()}};
            os << "Q family not constructed: " << e.what() << "\n";
        }
    }

    const bool certified = complete && banded.pass && q_ok;
    res.report["verdict"] = certified ? "Certified" : "CheckFailed";
    os << "verdict: " << (certified ? "Certified" : "CheckFailed") << "\n";
    append_reference(os, spec);
    res.exit_code = certified ? 0 : 2;
    res.human = os.str();
    return res;
}

}  // namespace framecast
