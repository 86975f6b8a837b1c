#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "framecast/dynsamp.hpp"
#include "framecast/frames.hpp"
#include "framecast/linalg.hpp"
#include "framecast/localglobal.hpp"
#include "framecast/projectors.hpp"

namespace py = pybind11;
using namespace framecast;

namespace {

Matrix matrix_from_rows(const std::vector<Vec>& rows) { return Matrix::from_rows(rows); }

std::vector<Vec> matrix_to_rows(const Matrix& m) {
    std::vector<Vec> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return rows;
}

std::string bounds_repr(const FrameBounds& b) {
    std::ostringstream os;
    os << "FrameBounds(lower=" << b.lower << ", upper=" << b.upper << ", provenance="
       << to_string(b.provenance) << ")";
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "certified local-to-global frame bounds on finite truncations";

    py::register_exception<Error>(m, "FramecastError");

    py::enum_<Provenance>(m, "Provenance")
        .value("Measured", Provenance::Measured)
        .value("TheoremPredicted", Provenance::TheoremPredicted);

    py::enum_<GlueVerdict>(m, "GlueVerdict")
        .value("Certified", GlueVerdict::Certified)
        .value("HypothesisFailed", GlueVerdict::HypothesisFailed)
        .value("ConditionFailed", GlueVerdict::ConditionFailed);

    py::enum_<WindowConvention>(m, "WindowConvention")
        .value("Disjoint", WindowConvention::Disjoint)
        .value("PaperOverlap", WindowConvention::PaperOverlap);

    py::enum_<GammaVariant>(m, "GammaVariant")
        .value("L2", GammaVariant::L2)
        .value("L1", GammaVariant::L1);

    py::class_<FrameBounds>(m, "FrameBounds")
        .def_readonly("lower", &FrameBounds::lower)
        .def_readonly("upper", &FrameBounds::upper)
        .def_readonly("provenance", &FrameBounds::provenance)
        .def("__repr__", &bounds_repr);

    py::class_<VectorSystem>(m, "VectorSystem")
        .def(py::init([](std::size_t dim, std::vector<Vec> vectors,
                         std::vector<std::string> labels) {
                 VectorSystem sys{dim, std::move(vectors), std::move(labels)};
                 sys.validate();
                 return sys;
             }),
             py::arg("dim"), py::arg("vectors"), py::arg("labels") = std::vector<std::string>{})
        .def_readonly("dim", &VectorSystem::dim)
        .def_readonly("vectors", &VectorSystem::vectors)
        .def_readonly("labels", &VectorSystem::labels)
        .def("__len__", [](const VectorSystem& s) { return s.vectors.size(); });

    m.def("analysis_matrix",
          [](const VectorSystem& sys) { return matrix_to_rows(analysis_matrix(sys)); },
          py::arg("system"));
    m.def("frame_operator",
          [](const VectorSystem& sys) { return matrix_to_rows(frame_operator(sys)); },
          py::arg("system"));
    m.def("frame_bounds", &frame_bounds, py::arg("system"), py::arg("tol") = 1e-10);
    m.def("is_frame",
          [](const VectorSystem& sys, double tol) {
              const FrameVerdict v = is_frame(sys, tol);
              return py::make_tuple(v.frame, v.bounds);
          },
          py::arg("system"), py::arg("tol") = 1e-10);
    m.def("canonical_dual", &canonical_dual, py::arg("system"), py::arg("tol") = 1e-10);
    m.def("reconstruct", &reconstruct, py::arg("dual"), py::arg("coefficients"));

    py::class_<Projector>(m, "Projector")
        .def(py::init([](const std::vector<Vec>& rows, double tol) {
                 return Projector(matrix_from_rows(rows), tol);
             }),
             py::arg("matrix"), py::arg("tol") = 1e-10)
        .def_static("coordinate", &Projector::coordinate, py::arg("dim"), py::arg("support"),
                    py::arg("tol") = 1e-10)
        .def_property_readonly("matrix",
                               [](const Projector& p) { return matrix_to_rows(p.matrix()); })
        .def_property_readonly("dim", &Projector::dim);

    py::class_<ProjectorFamily>(m, "ProjectorFamily")
        .def(py::init([](std::size_t dim, std::vector<Projector> members) {
                 ProjectorFamily fam{dim, std::move(members)};
                 fam.validate();
                 return fam;
             }),
             py::arg("dim"), py::arg("members"))
        .def_readonly("dim", &ProjectorFamily::dim)
        .def_readonly("members", &ProjectorFamily::members);

    py::class_<PartitionProjectors>(m, "PartitionProjectors")
        .def(py::init([](std::size_t dim, std::vector<std::vector<std::size_t>> blocks) {
                 PartitionProjectors part{dim, std::move(blocks)};
                 part.validate();
                 return part;
             }),
             py::arg("dim"), py::arg("blocks"))
        .def_readonly("dim", &PartitionProjectors::dim)
        .def_readonly("blocks", &PartitionProjectors::blocks)
        .def("family", &PartitionProjectors::family, py::arg("tol") = 1e-10);

    m.def("fusion_bounds", &fusion_bounds, py::arg("family"), py::arg("tol") = 1e-10);
    m.def("is_complete", &is_complete, py::arg("family"), py::arg("tol") = 1e-10);

    py::class_<PairViolation>(m, "PairViolation")
        .def_readonly("j", &PairViolation::j)
        .def_readonly("k", &PairViolation::k)
        .def_readonly("magnitude", &PairViolation::magnitude)
        .def_property_readonly("kind", [](const PairViolation& v) {
            return v.kind == PairViolation::Kind::NonCommuting ? "non_commuting"
                                                               : "nonzero_product";
        });

    py::class_<BandedCommutingVerdict>(m, "BandedCommutingVerdict")
        .def_readonly("passed", &BandedCommutingVerdict::pass)
        .def_readonly("violations", &BandedCommutingVerdict::violations);

    m.def("check_banded_commuting", &check_banded_commuting, py::arg("family"), py::arg("band"),
          py::arg("tol") = 1e-10);
    m.def("disjointify", &disjointify, py::arg("family"), py::arg("tol") = 1e-10);

    py::class_<LocalSystem>(m, "LocalSystem")
        .def(py::init([](std::size_t dim, std::vector<std::vector<Vec>> patches) {
                 LocalSystem local{dim, std::move(patches)};
                 local.validate();
                 return local;
             }),
             py::arg("dim"), py::arg("patches"))
        .def_readonly("dim", &LocalSystem::dim)
        .def_readonly("patches", &LocalSystem::patches);

    py::class_<OperatorFamily>(m, "OperatorFamily")
        .def(py::init([](std::size_t dim, const std::vector<std::vector<Vec>>& members) {
                 OperatorFamily ops;
                 ops.dim = dim;
                 for (const auto& rows : members) ops.members.push_back(matrix_from_rows(rows));
                 ops.validate();
                 return ops;
             }),
             py::arg("dim"), py::arg("members"))
        .def_readonly("dim", &OperatorFamily::dim);

    py::class_<EnvelopeSequence>(m, "EnvelopeSequence")
        .def_readonly("k", &EnvelopeSequence::k)
        .def_readonly("values", &EnvelopeSequence::values)
        .def_readonly("l1", &EnvelopeSequence::l1)
        .def("at", &EnvelopeSequence::at, py::arg("offset"));

    py::class_<HypothesisCheck>(m, "HypothesisCheck")
        .def_readonly("name", &HypothesisCheck::name)
        .def_readonly("passed", &HypothesisCheck::pass)
        .def_readonly("magnitude", &HypothesisCheck::magnitude);

    py::class_<PropOfCertificate>(m, "PropOfCertificate")
        .def_readonly("fusion", &PropOfCertificate::fusion)
        .def_readonly("local_uniform", &PropOfCertificate::local_uniform)
        .def_readonly("predicted", &PropOfCertificate::predicted)
        .def_readonly("measured", &PropOfCertificate::measured)
        .def_readonly("hypothesis_report", &PropOfCertificate::hypothesis_report)
        .def_readonly("verdict", &PropOfCertificate::verdict);

    py::class_<L1Certificate>(m, "L1Certificate")
        .def_readonly("local_uniform", &L1Certificate::local_uniform)
        .def_readonly("envelopes", &L1Certificate::envelopes)
        .def_readonly("sum_l1", &L1Certificate::sum_l1)
        .def_readonly("sum_l1_sq", &L1Certificate::sum_l1_sq)
        .def_readonly("predicted_statement", &L1Certificate::predicted_statement)
        .def_readonly("predicted_proof", &L1Certificate::predicted_proof)
        .def_readonly("statement_brackets", &L1Certificate::statement_brackets)
        .def_readonly("proof_brackets", &L1Certificate::proof_brackets)
        .def_readonly("measured", &L1Certificate::measured)
        .def_readonly("hypothesis_report", &L1Certificate::hypothesis_report)
        .def_readonly("verdict", &L1Certificate::verdict)
        .def("best_predicted", &L1Certificate::best_predicted);

    m.def("assemble_global", &assemble_global, py::arg("operators"), py::arg("local"));
    m.def("verify_prop_of", &verify_prop_of, py::arg("operators"), py::arg("local"),
          py::arg("tol") = 1e-10);
    m.def("deduce_fusion_bounds", &deduce_fusion_bounds, py::arg("local_uniform"),
          py::arg("global_measured"));
    m.def("envelope", &envelope, py::arg("partition"), py::arg("local"));
    m.def("theorem_l1_check", &theorem_l1_check, py::arg("partition"), py::arg("local"),
          py::arg("tol") = 1e-10);

    py::class_<SupportedVector>(m, "SupportedVector")
        .def(py::init<int, Vec>(), py::arg("offset"), py::arg("coeffs"))
        .def_static("delta", &SupportedVector::delta, py::arg("position") = 0)
        .def_property_readonly("offset", &SupportedVector::offset)
        .def_property_readonly("coeffs", &SupportedVector::coeffs)
        .def("at", &SupportedVector::at, py::arg("index"))
        .def("shifted", &SupportedVector::shifted, py::arg("by"))
        .def("__eq__", [](const SupportedVector& a, const SupportedVector& b) { return a == b; });

    m.def("convolve", &convolve, py::arg("a"), py::arg("b"));
    m.def("conv_power", &conv_power, py::arg("kernel"), py::arg("k"));

    py::class_<DSSystemSpec>(m, "DSSystemSpec")
        .def(py::init([](SupportedVector kernel, std::size_t window_len,
                         std::vector<std::size_t> omega, unsigned iterations,
                         WindowConvention convention) {
                 DSSystemSpec spec;
                 spec.kernel = std::move(kernel);
                 spec.window_len = window_len;
                 spec.omega = std::move(omega);
                 spec.iterations = iterations;
                 spec.convention = convention;
                 spec.validate();
                 return spec;
             }),
             py::arg("kernel"), py::arg("window_len"), py::arg("omega"), py::arg("iterations"),
             py::arg("convention") = WindowConvention::Disjoint)
        .def_readonly("window_len", &DSSystemSpec::window_len)
        .def_readonly("omega", &DSSystemSpec::omega)
        .def_readonly("iterations", &DSSystemSpec::iterations)
        .def_readonly("convention", &DSSystemSpec::convention)
        .def_property_readonly("stride", &DSSystemSpec::stride);

    m.def("ds_local_system", &ds_local_system, py::arg("spec"));
    m.def("gamma",
          [](const DSSystemSpec& spec) {
              const GammaPair g = gamma(spec);
              return py::make_tuple(g.l2, g.l1);
          },
          py::arg("spec"));

    py::class_<DSReport>(m, "DSReport")
        .def_readonly("local_bounds", &DSReport::local_bounds)
        .def_readonly("gamma_l2", &DSReport::gamma_l2)
        .def_readonly("gamma_l1", &DSReport::gamma_l1)
        .def_readonly("variant", &DSReport::variant)
        .def_readonly("gamma_selected", &DSReport::gamma_selected)
        .def_readonly("predicted", &DSReport::predicted)
        .def_readonly("measured", &DSReport::measured)
        .def_readonly("full_bounds", &DSReport::full_bounds)
        .def_readonly("verdict", &DSReport::verdict)
        .def_readonly("truncation_blocks", &DSReport::truncation_blocks)
        .def_readonly("det_phi", &DSReport::det_phi)
        .def_readonly("sigma_min", &DSReport::sigma_min);

    m.def("ds_check", &ds_check, py::arg("spec"), py::arg("truncation_blocks") = 9,
          py::arg("tol") = 1e-10, py::arg("variant") = GammaVariant::L2);
    m.def("ds_global_system",
          [](const DSSystemSpec& spec, std::size_t blocks) {
              return ds_global_system(spec, blocks, nullptr);
          },
          py::arg("spec"), py::arg("truncation_blocks") = 9);

    m.def("shifted_assembly",
          [](const VectorSystem& window, const std::vector<int>& shifts,
             std::pair<int, int> domain) {
              return shifted_assembly(window, shifts, IndexWindow{domain.first, domain.second});
          },
          py::arg("window_system"), py::arg("shifts"), py::arg("domain"));

    m.def("diag_ds_system",
          [](const Vec& diagonal, const PartitionProjectors& blocks, const LocalSystem& gens,
             std::size_t iterations) {
              return diag_ds_system(Matrix::diagonal(diagonal), blocks, gens, iterations);
          },
          py::arg("diagonal"), py::arg("blocks"), py::arg("generators"), py::arg("iterations"));
}
