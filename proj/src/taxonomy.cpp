#include "sstc/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include <json.hpp>

#include "sstc/error.hpp"

namespace sstc {

using nlohmann::json;

namespace {

struct Builder {
  std::vector<std::string> names;
  std::vector<std::optional<FeatureId>> parents;
  std::vector<std::vector<FeatureId>> children;
  std::vector<std::size_t> depths;
  std::vector<std::uint32_t> ends;
  std::vector<std::string> path;  // names from root to the node being visited

  FeatureId visit(const json& obj, std::optional<FeatureId> parent, std::size_t depth) {
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, "taxonomy node must be an object");
    auto name_it = obj.find("name");
    if (name_it == obj.end() || !name_it->is_string()) {
      throw Error(ErrorCode::ParseError, "taxonomy node without a string \"name\"");
    }
    const std::string name = name_it->get<std::string>();
    if (name.empty()) throw Error(ErrorCode::ParseError, "taxonomy node with empty name");
    if (std::find(path.begin(), path.end(), name) != path.end()) {
      throw Error(ErrorCode::CycleDetected, "\"" + name + "\" appears among its own ancestors");
    }
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      throw Error(ErrorCode::DuplicateName, "\"" + name + "\" is defined more than once");
    }

    const FeatureId id{static_cast<std::uint32_t>(names.size())};
    names.push_back(name);
    parents.push_back(parent);
    children.emplace_back();
    depths.push_back(depth);
    ends.push_back(0);

    auto kids = obj.find("children");
    if (kids != obj.end() && !kids->is_null()) {
      if (!kids->is_array()) {
        throw Error(ErrorCode::ParseError, "\"children\" of \"" + name + "\" must be an array");
      }
      path.push_back(name);
      for (const auto& child : *kids) {
        const FeatureId cid = visit(child, id, depth + 1);
        children[id.value].push_back(cid);
      }
      path.pop_back();
    }
    ends[id.value] = static_cast<std::uint32_t>(names.size());
    return id;
  }
};

}  // namespace

Taxonomy Taxonomy::parse(std::string_view json_text) {
  const bool blank = std::all_of(json_text.begin(), json_text.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
  if (blank) throw Error(ErrorCode::EmptyDocument, "taxonomy document is empty");

  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (doc.is_null() || (doc.is_object() && doc.empty())) {
    throw Error(ErrorCode::EmptyDocument, "taxonomy document has no nodes");
  }
  if (doc.is_array()) {
    if (doc.empty()) throw Error(ErrorCode::EmptyDocument, "taxonomy document has no nodes");
    if (doc.size() > 1) {
      throw Error(ErrorCode::MultipleRoots,
                  "taxonomy document lists " + std::to_string(doc.size()) + " top-level nodes");
    }
    doc = doc.at(0);
  }

  Builder b;
  b.visit(doc, std::nullopt, 0);

  Taxonomy t;
  t.nodes_.reserve(b.names.size());
  for (std::size_t i = 0; i < b.names.size(); ++i) {
    t.nodes_.push_back(Node{b.names[i], b.parents[i], b.children[i], b.depths[i], b.ends[i]});
    t.by_name_.emplace(b.names[i], FeatureId{static_cast<std::uint32_t>(i)});
  }
  return t;
}

std::string Taxonomy::serialize(int indent) const {
  std::function<json(FeatureId)> emit = [&](FeatureId f) {
    json obj;
    obj["name"] = name(f);
    json kids = json::array();
    for (const auto c : children(f)) kids.push_back(emit(c));
    if (!kids.empty()) obj["children"] = std::move(kids);
    return obj;
  };
  return emit(root()).dump(indent);
}

const Taxonomy::Node& Taxonomy::node(FeatureId f) const {
  if (f.value >= nodes_.size()) {
    throw Error(ErrorCode::UnknownFeature, "feature id " + std::to_string(f.value));
  }
  return nodes_[f.value];
}

std::optional<FeatureId> Taxonomy::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

FeatureId Taxonomy::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error(ErrorCode::UnknownFeature, "\"" + std::string(name) + "\"");
}

std::optional<FeatureId> Taxonomy::parent(FeatureId f) const { return node(f).parent; }

std::size_t Taxonomy::height() const {
  std::size_t h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.depth + 1);
  return h;
}

std::vector<FeatureId> Taxonomy::leaf_descendants(FeatureId f) const {
  std::vector<FeatureId> out;
  for (std::uint32_t v = f.value; v < node(f).subtree_end; ++v) {
    if (nodes_[v].children.empty()) out.push_back(FeatureId{v});
  }
  return out;
}

std::vector<FeatureId> children(const Taxonomy& t, FeatureId f) {
  const auto kids = t.children(f);
  return {kids.begin(), kids.end()};
}

std::vector<FeatureId> children(const Taxonomy& t, std::string_view f) {
  return children(t, t.id_of(f));
}

FeatureView flatten(const Taxonomy& t, FeatureId f, const Dataset& data) {
  FeatureView view{f, {}, !t.is_leaf(f)};
  for (const auto& inst : data.instances) {
    if (t.in_subtree(f, inst.feature)) view.instances.push_back(inst);
  }
  std::stable_sort(view.instances.begin(), view.instances.end(),
                   [](const FeatureInstance& a, const FeatureInstance& b) {
                     return instance_key(a) < instance_key(b);
                   });
  return view;
}

FeatureView flatten(const Taxonomy& t, std::string_view f, const Dataset& data) {
  return flatten(t, t.id_of(f), data);
}

}  // namespace sstc
