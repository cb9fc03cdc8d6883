#include "famrep/cli/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace famrep::cli {

bool Node::has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

Node Node::at(const std::string& key) const {
    if (!value_->is_object()) fail("expected an object");
    const auto it = value_->find(key);
    if (it == value_->end()) fail("missing field \"" + key + "\"");
    return Node(*it, path_ + "." + key);
}

std::optional<Node> Node::find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
}

Node Node::at(std::size_t index) const {
    if (!value_->is_array()) fail("expected an array");
    if (index >= value_->size()) fail("index " + std::to_string(index) + " out of range");
    return Node((*value_)[index], path_ + "[" + std::to_string(index) + "]");
}

std::size_t Node::size() const {
    if (!value_->is_array()) fail("expected an array");
    return value_->size();
}

std::vector<Node> Node::items() const {
    std::vector<Node> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i));
    return out;
}

std::vector<std::pair<std::string, Node>> Node::members() const {
    if (!value_->is_object()) fail("expected an object");
    std::vector<std::pair<std::string, Node>> out;
    for (auto it = value_->begin(); it != value_->end(); ++it) {
        out.emplace_back(it.key(), Node(it.value(), path_ + "." + it.key()));
    }
    return out;
}

std::string Node::string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
}

Rational Node::rational() const {
    if (value_->is_number_integer()) {
        return Rational(mpz_class(value_->dump()));
    }
    if (!value_->is_string()) fail("expected a rational (\"p/q\" string or integer)");
    try {
        return parse_rational(value_->get<std::string>());
    } catch (const std::invalid_argument&) {
        fail("malformed rational \"" + value_->get<std::string>() + "\"");
    }
}

std::uint64_t Node::unsigned_integer() const {
    if (!value_->is_number_unsigned()) fail("expected a nonnegative integer");
    return value_->get<std::uint64_t>();
}

bool Node::boolean() const {
    if (!value_->is_boolean()) fail("expected true or false");
    return value_->get<bool>();
}

std::vector<std::string> Node::strings() const {
    std::vector<std::string> out;
    for (const auto& item : items()) out.push_back(item.string());
    return out;
}

std::vector<Rational> Node::rationals() const {
    std::vector<Rational> out;
    for (const auto& item : items()) out.push_back(item.rational());
    return out;
}

Json load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("$", "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Json to_json(const Rational& value) { return to_string(value); }

Json to_json(const std::vector<Rational>& values) {
    Json out = Json::array();
    for (const auto& v : values) out.push_back(to_string(v));
    return out;
}

Json to_json(const Subset& set) {
    Json out = Json::array();
    for (const auto& l : set.labels()) out.push_back(l);
    return out;
}

Json to_json(const MeasureStructure& ms) {
    Json atoms = Json::array();
    for (const auto& a : ms.ring().atoms()) atoms.push_back(to_json(a));
    return Json{{"atoms", atoms}, {"masses", to_json(ms.atom_masses())}};
}

GroundSet read_ground(const Node& node) {
    const auto labels = node.strings();
    if (labels.empty()) node.fail("ground set is empty");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!seen.insert(labels[i]).second) node.at(i).fail("duplicate label \"" + labels[i] + "\"");
    }
    return GroundSet(labels);
}

Subset read_subset(const GroundSet& ground, const Node& node) {
    Subset s(ground);
    for (const auto& item : node.items()) {
        const auto label = item.string();
        const auto index = ground.find(label);
        if (!index) item.fail("unknown label \"" + label + "\"");
        s.insert(*index);
    }
    return s;
}

RingLayout read_ring(const GroundSet& ground, const std::optional<Node>& atoms) {
    std::vector<Subset> given;
    if (atoms) {
        for (const auto& item : atoms->items()) given.push_back(read_subset(ground, item));
    } else {
        for (std::size_t i = 0; i < ground.size(); ++i) given.push_back(ground.singleton(i));
    }
    RingLayout layout{SetRing::trivial(ground), {}};
    try {
        layout.ring = SetRing::from_atoms(ground, given);
    } catch (const InvariantError& e) {
        atoms->fail(e.what());
    }
    // from_atoms sorts canonically; remember where each atom came from.
    for (const auto& atom : layout.ring.atoms()) {
        for (std::size_t i = 0; i < given.size(); ++i) {
            if (given[i] == atom) layout.file_index.push_back(i);
        }
    }
    return layout;
}

std::vector<Rational> read_masses(const RingLayout& layout, const Node& node) {
    if (node.size() != layout.file_index.size()) {
        node.fail("expected " + std::to_string(layout.file_index.size()) + " masses, one per atom");
    }
    const auto values = node.rationals();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) node.at(i).fail("negative mass");
    }
    std::vector<Rational> ordered;
    for (const auto i : layout.file_index) ordered.push_back(values[i]);
    return ordered;
}

MeasureStructure read_structure(const Node& node) {
    const GroundSet ground = read_ground(node.at("ground"));
    auto layout = read_ring(ground, node.find("atoms"));
    auto masses = read_masses(layout, node.at("masses"));
    return MeasureStructure(std::move(layout.ring), std::move(masses));
}

RandomQuantity read_quantity(const GroundSet& ground, const Node& node) {
    std::vector<Rational> values(ground.size());
    if (node.json().is_array()) {
        if (node.size() != ground.size()) {
            node.fail("expected " + std::to_string(ground.size()) + " values, one per point");
        }
        values = node.rationals();
    } else {
        std::vector<bool> given(ground.size(), false);
        for (const auto& [label, value] : node.members()) {
            const auto index = ground.find(label);
            if (!index) value.fail("unknown label \"" + label + "\"");
            values[*index] = value.rational();
            given[*index] = true;
        }
        for (std::size_t i = 0; i < given.size(); ++i) {
            if (!given[i]) node.fail("no value for \"" + ground.label(i) + "\"");
        }
    }
    return RandomQuantity(ground, values);
}

PointMap read_point_map(const GroundSet& domain, const GroundSet& codomain, const Node& node) {
    PointMap map{domain, codomain, std::vector<std::size_t>(domain.size())};
    const auto resolve = [&](const Node& item) {
        const auto label = item.string();
        const auto index = codomain.find(label);
        if (!index) item.fail("unknown label \"" + label + "\"");
        return *index;
    };
    if (node.json().is_array()) {
        if (node.size() != domain.size()) {
            node.fail("expected " + std::to_string(domain.size()) + " labels, one per point");
        }
        for (std::size_t i = 0; i < domain.size(); ++i) map.image[i] = resolve(node.at(i));
    } else {
        std::vector<bool> given(domain.size(), false);
        for (const auto& [label, value] : node.members()) {
            const auto index = domain.find(label);
            if (!index) value.fail("unknown label \"" + label + "\"");
            map.image[*index] = resolve(value);
            given[*index] = true;
        }
        for (std::size_t i = 0; i < given.size(); ++i) {
            if (!given[i]) node.fail("no image for \"" + domain.label(i) + "\"");
        }
    }
    return map;
}

}  // namespace famrep::cli
