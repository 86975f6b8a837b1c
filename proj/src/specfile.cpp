#include "framecast/specfile.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace framecast {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ParseError(origin + ": " + what);
}

const json& require(const json& j, const char* field, const std::string& origin) {
    auto it = j.find(field);
    if (it == j.end()) fail(origin, std::string("missing field \"") + field + "\"");
    return *it;
}

std::size_t require_positive(const json& j, const char* field, const std::string& origin) {
    const json& v = require(j, field, origin);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
        fail(origin, std::string("field \"") + field + "\" must be a positive integer");
    }
    return v.get<std::size_t>();
}

Vec parse_vector(const json& j, const char* field, const std::string& origin) {
    if (!j.is_array()) fail(origin, std::string("field \"") + field + "\" must be an array of numbers");
    Vec out;
    out.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) fail(origin, std::string("field \"") + field + "\" must contain numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::size_t> parse_index_set(const json& j, const char* field, const std::string& origin) {
    if (!j.is_array()) fail(origin, std::string("field \"") + field + "\" must be an array of indices");
    std::vector<std::size_t> out;
    for (const auto& x : j) {
        if (!x.is_number_unsigned()) fail(origin, std::string("field \"") + field + "\" must contain nonnegative integers");
        out.push_back(x.get<std::size_t>());
    }
    return out;
}

VectorSystem parse_vector_system(const json& j, const std::string& origin) {
    VectorSystem sys;
    sys.dim = require_positive(j, "dim", origin);
    const json& vecs = require(j, "vectors", origin);
    if (!vecs.is_array() || vecs.empty()) fail(origin, "\"vectors\" must be a nonempty array");
    for (const auto& v : vecs) sys.vectors.push_back(parse_vector(v, "vectors", origin));
    if (j.contains("labels")) {
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) fail(origin, "\"labels\" must contain strings");
            sys.labels.push_back(l.get<std::string>());
        }
    }
    try {
        sys.validate();
    } catch (const Error& e) {
        fail(origin, e.what());
    }
    return sys;
}

ProjectorFamilySpec parse_projector_family(const json& j, const std::string& origin) {
    ProjectorFamilySpec spec;
    spec.dim = require_positive(j, "dim", origin);
    const bool has_blocks = j.contains("blocks");
    const bool has_matrices = j.contains("matrices");
    if (has_blocks == has_matrices) {
        fail(origin, "projector family needs exactly one of \"blocks\" or \"matrices\"");
    }
    if (has_blocks) {
        for (const auto& b : j["blocks"]) spec.index_sets.push_back(parse_index_set(b, "blocks", origin));
        if (spec.index_sets.empty()) fail(origin, "\"blocks\" must be nonempty");
    } else {
        for (const auto& m : j["matrices"]) {
            if (!m.is_array() || m.size() != spec.dim) fail(origin, "each matrix must have dim rows");
            std::vector<Vec> rows;
            for (const auto& r : m) {
                Vec row = parse_vector(r, "matrices", origin);
                if (row.size() != spec.dim) fail(origin, "each matrix row must have dim entries");
                rows.push_back(std::move(row));
            }
            spec.matrices.push_back(Matrix::from_rows(rows));
        }
        if (spec.matrices.empty()) fail(origin, "\"matrices\" must be nonempty");
    }
    return spec;
}

LocalSystemSpec parse_local_system(const json& j, const std::string& origin) {
    LocalSystemSpec spec;
    const std::size_t dim = require_positive(j, "dim", origin);
    spec.partition.dim = dim;
    for (const auto& b : require(j, "blocks", origin)) {
        spec.partition.blocks.push_back(parse_index_set(b, "blocks", origin));
    }
    spec.local.dim = dim;
    const json& patches = require(j, "patches", origin);
    if (!patches.is_array() || patches.size() != spec.partition.blocks.size()) {
        fail(origin, "\"patches\" must have one generator list per block");
    }
    for (const auto& patch : patches) {
        std::vector<Vec> gens;
        for (const auto& g : patch) gens.push_back(parse_vector(g, "patches", origin));
        spec.local.patches.push_back(std::move(gens));
    }
    try {
        spec.partition.validate();
        spec.local.validate();
    } catch (const Error& e) {
        fail(origin, e.what());
    }
    return spec;
}

DSSystemSpec parse_ds_system(const json& j, const std::string& origin) {
    DSSystemSpec spec;
    const json& kj = require(j, "kernel", origin);
    const json& cj = require(kj, "coeffs", origin);
    int offset = 0;
    if (kj.contains("offset")) {
        if (!kj["offset"].is_number_integer()) fail(origin, "kernel \"offset\" must be an integer");
        offset = kj["offset"].get<int>();
    }
    spec.kernel = SupportedVector(offset, parse_vector(cj, "kernel.coeffs", origin));
    spec.window_len = require_positive(j, "window_len", origin);
    spec.omega = parse_index_set(require(j, "omega", origin), "omega", origin);
    const json& it = require(j, "iterations", origin);
    if (!it.is_number_unsigned()) fail(origin, "\"iterations\" must be a nonnegative integer");
    spec.iterations = it.get<unsigned>();
    if (j.contains("convention")) {
        const std::string c = j["convention"].get<std::string>();
        if (c == "disjoint") {
            spec.convention = WindowConvention::Disjoint;
        } else if (c == "paper_overlap") {
            spec.convention = WindowConvention::PaperOverlap;
        } else {
            fail(origin, "\"convention\" must be \"disjoint\" or \"paper_overlap\"");
        }
    }
    if (j.contains("stride")) {
        if (!j["stride"].is_number_integer()) fail(origin, "\"stride\" must be an integer");
        spec.stride_override = j["stride"].get<int>();
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        fail(origin, e.what());
    }
    return spec;
}

}  // namespace

ProjectorFamily ProjectorFamilySpec::family(double tol) const {
    ProjectorFamily fam;
    fam.dim = dim;
    if (!index_sets.empty()) {
        for (const auto& block : index_sets) {
            fam.members.push_back(Projector::coordinate(dim, block, tol));
        }
    } else {
        for (const Matrix& m : matrices) fam.members.emplace_back(m, tol);
    }
    fam.validate();
    return fam;
}

const char* SpecFile::kind() const {
    switch (payload.index()) {
        case 0: return "vector_system";
        case 1: return "projector_family";
        case 2: return "local_system";
        default: return "ds_system";
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

SpecFile parse_spec(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, e.what());
    }
    if (!j.is_object()) fail(origin, "spec must be a JSON object");
    const json& kind = require(j, "kind", origin);
    if (!kind.is_string()) fail(origin, "\"kind\" must be a string");

    SpecFile spec;
    spec.path = origin;
    spec.digest = fnv1a_hex(text);
    if (j.contains("reference")) spec.reference = j["reference"];

    const std::string k = kind.get<std::string>();
    if (k == "vector_system") {
        spec.payload = parse_vector_system(j, origin);
    } else if (k == "projector_family") {
        spec.payload = parse_projector_family(j, origin);
    } else if (k == "local_system") {
        spec.payload = parse_local_system(j, origin);
    } else if (k == "ds_system") {
        spec.payload = parse_ds_system(j, origin);
    } else {
        fail(origin, "unknown kind \"" + k + "\"");
    }
    return spec;
}

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str(), path);
}

}  // namespace framecast
