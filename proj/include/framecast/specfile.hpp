#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "framecast/dynsamp.hpp"
#include "framecast/frames.hpp"
#include "framecast/localglobal.hpp"
#include "framecast/projectors.hpp"

namespace framecast {

/// Projector family description: either coordinate index sets or dense
/// matrices (exactly one of the two is populated).
struct ProjectorFamilySpec {
    std::size_t dim = 0;
    std::vector<std::vector<std::size_t>> index_sets;
    std::vector<Matrix> matrices;

    ProjectorFamily family(double tol) const;
};

/// Local system plus the coordinate partition it lives on.
struct LocalSystemSpec {
    PartitionProjectors partition;
    LocalSystem local;
};

/// One parsed spec document: a single JSON file with a top-level "kind"
/// discriminator. Optional "reference" annotations are echoed into reports
/// verbatim (displayed, never asserted).
struct SpecFile {
    std::variant<VectorSystem, ProjectorFamilySpec, LocalSystemSpec, DSSystemSpec> payload;
    nlohmann::json reference;  // null when absent
    std::string path;
    std::string digest;  // FNV-1a 64 content hash, hex

    const char* kind() const;
};

std::string fnv1a_hex(const std::string& bytes);

SpecFile parse_spec(const std::string& text, const std::string& origin);
SpecFile load_spec(const std::string& path);

}  // namespace framecast
