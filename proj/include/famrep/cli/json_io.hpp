#pragma once

// JSON reading and writing for instance and verdict files. Every reader
// tracks the JSON path it is looking at so that malformed input can be
// reported as, e.g., "$.structure.masses[2]: expected a rational".

#include "famrep/integrate.hpp"
#include "famrep/conglomerate.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace famrep::cli {

using Json = nlohmann::ordered_json;

/// Malformed input, located by a JSON path.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)), message_(message) {}
    const std::string& path() const { return path_; }
    const std::string& message() const { return message_; }

private:
    std::string path_;
    std::string message_;
};

/// Read-only view of a JSON value together with its path.
class Node {
public:
    Node(const Json& value, std::string path) : value_(&value), path_(std::move(path)) {}

    const Json& json() const { return *value_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& message) const { throw SchemaError(path_, message); }

    bool has(const std::string& key) const;
    /// Member access; throws SchemaError when this is not an object or the key is missing.
    Node at(const std::string& key) const;
    std::optional<Node> find(const std::string& key) const;
    /// Element access; throws SchemaError unless this is an array.
    Node at(std::size_t index) const;
    std::size_t size() const;
    std::vector<Node> items() const;
    /// (key, value) pairs of an object, in file order.
    std::vector<std::pair<std::string, Node>> members() const;

    std::string string() const;
    Rational rational() const;
    std::uint64_t unsigned_integer() const;
    bool boolean() const;
    std::vector<std::string> strings() const;
    std::vector<Rational> rationals() const;

private:
    const Json* value_;
    std::string path_;
};

Json load_file(const std::filesystem::path& path);
/// Two-space indentation plus a trailing newline.
std::string dump(const Json& value);
/// Writes through a temporary file in the same directory and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

Json to_json(const Rational& value);
Json to_json(const std::vector<Rational>& values);
Json to_json(const Subset& set);
/// {"atoms": [[labels]...], "masses": [...]}
Json to_json(const MeasureStructure& ms);

/// A list of distinct labels.
GroundSet read_ground(const Node& node);
/// A list of labels drawn from `ground`.
Subset read_subset(const GroundSet& ground, const Node& node);
/// A ring given by its atoms, with the file position of each atom so that
/// per-atom data can be matched to the canonical atom order.
struct RingLayout {
    SetRing ring;
    std::vector<std::size_t> file_index;
};

/// Atoms listed under `atoms`, or the power set when absent.
RingLayout read_ring(const GroundSet& ground, const std::optional<Node>& atoms);
/// One nonnegative mass per atom, in file order; returned in ring order.
std::vector<Rational> read_masses(const RingLayout& layout, const Node& node);
/// {"ground": [...], "atoms": [[...], ...], "masses": [...]}; without "atoms"
/// the ring is the power set and "masses" lists one mass per ground point.
MeasureStructure read_structure(const Node& node);
/// A value per ground point: a list in ground order or an object keyed by label.
RandomQuantity read_quantity(const GroundSet& ground, const Node& node);
/// A codomain label per domain point: a list in domain order or an object.
PointMap read_point_map(const GroundSet& domain, const GroundSet& codomain, const Node& node);

}  // namespace famrep::cli
