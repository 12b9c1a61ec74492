#include "planact/exec/tree.hpp"

#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "planact/common/error.hpp"

namespace planact::exec {

namespace pt = boost::property_tree;

const char* to_string(NodeType t) {
  switch (t) {
    case NodeType::Sequence: return "Sequence";
    case NodeType::Fallback: return "Fallback";
    case NodeType::Condition: return "Condition";
    case NodeType::Sampler: return "Sampler";
    case NodeType::Action: return "Action";
  }
  return "?";
}

const char* to_string(TreeStatus s) {
  switch (s) {
    case TreeStatus::Idle: return "Idle";
    case TreeStatus::Running: return "Running";
    case TreeStatus::Succeeded: return "Succeeded";
    case TreeStatus::Failed: return "Failed";
  }
  return "?";
}

Node Node::sequence(std::vector<Node> children) {
  Node n;
  n.type = NodeType::Sequence;
  n.children = std::move(children);
  return n;
}

Node Node::fallback(std::vector<Node> children) {
  Node n;
  n.type = NodeType::Fallback;
  n.children = std::move(children);
  return n;
}

Node Node::condition(std::string predicate, std::vector<std::string> args, std::string out, bool negated) {
  Node n;
  n.type = NodeType::Condition;
  n.predicate = std::move(predicate);
  n.args = std::move(args);
  n.out = std::move(out);
  n.negated = negated;
  return n;
}

Node Node::sampler_node(std::string kind, std::vector<std::string> inputs, std::vector<std::string> outputs,
                        std::size_t budget) {
  Node n;
  n.type = NodeType::Sampler;
  n.sampler = std::move(kind);
  n.inputs = std::move(inputs);
  n.outputs = std::move(outputs);
  n.budget = budget;
  return n;
}

Node Node::action_node(world::CommandKind kind, std::vector<std::string> params, std::string toggle) {
  Node n;
  n.type = NodeType::Action;
  n.action = kind;
  n.params = std::move(params);
  n.toggle = std::move(toggle);
  return n;
}

std::size_t node_count(const Node& n) {
  std::size_t c = 1;
  for (const Node& child : n.children) c += node_count(child);
  return c;
}

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string words(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) out += (out.empty() ? "" : " ") + s;
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::map<std::string, std::string> attributes(const Node& n) {
  std::map<std::string, std::string> a;
  switch (n.type) {
    case NodeType::Sequence:
    case NodeType::Fallback:
      break;
    case NodeType::Condition:
      a["predicate"] = n.predicate;
      a["args"] = words(n.args);
      if (n.negated) a["negated"] = "true";
      if (!n.out.empty()) a["out"] = n.out;
      break;
    case NodeType::Sampler:
      a["kind"] = n.sampler;
      a["inputs"] = words(n.inputs);
      a["outputs"] = words(n.outputs);
      a["budget"] = std::to_string(n.budget);
      break;
    case NodeType::Action:
      a["kind"] = world::to_string(n.action);
      if (!n.params.empty()) a["params"] = words(n.params);
      if (!n.toggle.empty()) a["toggle"] = n.toggle;
      break;
  }
  return a;
}

void write_element(std::ostream& os, const std::string& tag, const std::map<std::string, std::string>& attrs,
                   int depth, bool open) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '<' << tag;
  for (const auto& [k, v] : attrs) os << ' ' << k << "=\"" << escape(v) << '"';
  os << (open ? ">\n" : "/>\n");
}

void write_node(std::ostream& os, const Node& n, int depth) {
  const std::string tag = to_string(n.type);
  const auto attrs = attributes(n);
  if (n.children.empty()) {
    write_element(os, tag, attrs, depth, false);
    return;
  }
  write_element(os, tag, attrs, depth, true);
  for (const Node& c : n.children) write_node(os, c, depth + 1);
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "</" << tag << ">\n";
}

world::CommandKind command_from(const std::string& s) {
  using world::CommandKind;
  for (CommandKind k : {CommandKind::MoveBase, CommandKind::Scan, CommandKind::PreApproach, CommandKind::Approach,
                        CommandKind::Grasp, CommandKind::Release, CommandKind::ToggleState}) {
    if (s == world::to_string(k)) return k;
  }
  throw UnknownNodeTag("action kind " + s);
}

std::string attr(const pt::ptree& el, const std::string& name, bool required = true) {
  if (auto a = el.get_child_optional("<xmlattr>." + name)) return a->data();
  if (required) throw MalformedXml("missing attribute " + name);
  return "";
}

Node read_node(const std::string& tag, const pt::ptree& el) {
  Node n;
  if (tag == "Sequence" || tag == "Fallback") {
    n.type = tag == "Sequence" ? NodeType::Sequence : NodeType::Fallback;
  } else if (tag == "Condition") {
    n.type = NodeType::Condition;
    n.predicate = attr(el, "predicate");
    n.args = split_words(attr(el, "args", false));
    n.negated = attr(el, "negated", false) == "true";
    n.out = attr(el, "out", false);
  } else if (tag == "Sampler") {
    n.type = NodeType::Sampler;
    n.sampler = attr(el, "kind");
    n.inputs = split_words(attr(el, "inputs", false));
    n.outputs = split_words(attr(el, "outputs", false));
    try {
      n.budget = std::stoul(attr(el, "budget"));
    } catch (const std::logic_error&) {
      throw MalformedXml("budget must be a count");
    }
  } else if (tag == "Action") {
    n.type = NodeType::Action;
    n.action = command_from(attr(el, "kind"));
    n.params = split_words(attr(el, "params", false));
    n.toggle = attr(el, "toggle", false);
  } else {
    throw UnknownNodeTag(tag);
  }
  for (const auto& [child_tag, child] : el) {
    if (child_tag == "<xmlattr>" || child_tag == "<xmlcomment>") continue;
    if (n.type != NodeType::Sequence && n.type != NodeType::Fallback) {
      throw MalformedXml(tag + " cannot have children");
    }
    n.children.push_back(read_node(child_tag, child));
  }
  return n;
}

pt::ptree parse_xml(std::string_view xml) {
  pt::ptree tree;
  std::istringstream in{std::string(xml)};
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw MalformedXml(e.what());
  }
  std::size_t roots = 0;
  for (const auto& [tag, _] : tree) roots += tag != "<xmlcomment>" ? 1 : 0;
  if (roots != 1) throw MalformedXml("expected exactly one root element");
  return tree;
}

const std::pair<const std::string, pt::ptree>& root_of(const pt::ptree& tree) {
  for (const auto& entry : tree) {
    if (entry.first != "<xmlcomment>") return entry;
  }
  throw MalformedXml("empty document");
}

}  // namespace

std::string serialize_node(const Node& n) {
  std::ostringstream os;
  write_node(os, n, 0);
  return os.str();
}

std::string serialize_tree(const CSubBT& t) {
  std::ostringstream os;
  write_element(os, "CSubBT", {{"name", t.name}, {"template", t.template_id}}, 0, true);
  if (!t.bindings.empty()) {
    os << "  <Bindings>\n";
    for (const auto& [slot, symbol] : t.bindings) write_element(os, "Bind", {{"slot", slot}, {"symbol", symbol}}, 2, false);
    os << "  </Bindings>\n";
  }
  write_node(os, t.root, 1);
  os << "</CSubBT>\n";
  return os.str();
}

Node deserialize_node(std::string_view xml) {
  const pt::ptree tree = parse_xml(xml);
  const auto& [tag, el] = root_of(tree);
  return read_node(tag, el);
}

CSubBT deserialize_tree(std::string_view xml) {
  const pt::ptree tree = parse_xml(xml);
  const auto& [tag, el] = root_of(tree);
  if (tag != "CSubBT") throw UnknownNodeTag(tag);
  CSubBT t;
  t.name = attr(el, "name");
  t.template_id = attr(el, "template");
  bool have_root = false;
  for (const auto& [child_tag, child] : el) {
    if (child_tag == "<xmlattr>" || child_tag == "<xmlcomment>") continue;
    if (child_tag == "Bindings") {
      for (const auto& [bind_tag, bind] : child) {
        if (bind_tag == "<xmlcomment>") continue;
        if (bind_tag != "Bind") throw UnknownNodeTag(bind_tag);
        t.bindings[attr(bind, "slot")] = attr(bind, "symbol");
      }
      continue;
    }
    if (have_root) throw MalformedXml("CSubBT has more than one root node");
    t.root = read_node(child_tag, child);
    have_root = true;
  }
  if (!have_root) throw MalformedXml("CSubBT without a root node");
  return t;
}

}  // namespace planact::exec
