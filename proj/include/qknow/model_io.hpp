#pragma once

#include <qknow/classical.hpp>
#include <qknow/formula.hpp>
#include <qknow/linalg.hpp>
#include <qknow/model.hpp>
#include <qknow/scalar.hpp>

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qknow {

enum class Severity { error };

struct ValidationIssue {
  Severity severity = Severity::error;
  /// JSON pointer to the offending value, e.g. "/agents/0/questions/0/blocks/1".
  std::string path;
  std::string message;
};

/// Empty iff the document describes a valid model.
struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool empty() const { return issues.empty(); }
  std::size_t size() const { return issues.size(); }
};

inline std::string to_string(const ValidationIssue& issue) {
  return "error " + (issue.path.empty() ? std::string("/") : issue.path) + ": " + issue.message;
}

/// A syntactically parsed model document (quantum fields or a "classical" block).
struct ModelDocument {
  nlohmann::json root;
  /// Object keys that appeared more than once, as JSON pointers.
  std::vector<std::string> duplicate_keys;

  bool is_classical() const { return root.is_object() && root.contains("classical"); }
};

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(ValidationReport report)
      : std::runtime_error(summarize(report)), report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  static std::string summarize(const ValidationReport& report) {
    std::string out = "invalid model document";
    for (const auto& issue : report.issues) out += "\n  " + to_string(issue);
    return out;
  }

  ValidationReport report_;
};

namespace detail {

inline std::string escape_pointer_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

/// Tracks the JSON pointer of the value being parsed so that repeated object
/// keys can be reported with their location.
class DuplicateKeyTracker {
 public:
  explicit DuplicateKeyTracker(std::vector<std::string>& sink) : sink_(&sink) {}

  bool operator()(int, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
    using E = nlohmann::json::parse_event_t;
    switch (event) {
      case E::object_start:
        enter_value();
        frames_.push_back({true, {}, 0, {}});
        break;
      case E::array_start:
        enter_value();
        frames_.push_back({false, {}, 0, {}});
        break;
      case E::key: {
        Frame& top = frames_.back();
        top.key = parsed.get<std::string>();
        if (!top.seen.insert(top.key).second) sink_->push_back(pointer());
        break;
      }
      case E::object_end:
      case E::array_end:
        frames_.pop_back();
        break;
      case E::value:
        enter_value();
        break;
    }
    return true;
  }

 private:
  struct Frame {
    bool object;
    std::string key;
    std::size_t next_index;
    std::set<std::string> seen;
  };

  void enter_value() {
    if (!frames_.empty() && !frames_.back().object) ++frames_.back().next_index;
  }

  std::string pointer() const {
    std::string out;
    for (const auto& f : frames_)
      out += "/" + (f.object ? escape_pointer_token(f.key) : std::to_string(f.next_index - 1));
    return out;
  }

  std::vector<std::string>* sink_;
  std::vector<Frame> frames_;
};

struct ReadResult {
  ValidationReport report;
  std::optional<Model> model;
  std::optional<ClassicalModel> classical;
};

/// Validates a document and, when it is clean, builds the model it describes.
class DocumentReader {
 public:
  ReadResult read(const ModelDocument& doc) {
    for (const auto& path : doc.duplicate_keys) error(path, "duplicate key");
    const auto& root = doc.root;
    if (!root.is_object()) {
      error("", "document must be a JSON object");
      return finish();
    }
    if (root.contains("format") && !(root["format"].is_number_integer() && root["format"].get<long long>() == 1))
      error("/format", "unsupported format (expected 1)");

    const bool has_quantum =
        root.contains("dimension") || root.contains("agents") || root.contains("events") || root.contains("states");
    if (root.contains("classical")) {
      if (has_quantum) error("/classical", "document mixes classical and quantum fields");
      for (const auto& [key, value] : root.items())
        if (key != "classical" && key != "format" && !has_quantum) error("/" + escape_pointer_token(key), "unknown field");
      if (!has_quantum) read_classical(root["classical"]);
    } else {
      for (const auto& [key, value] : root.items())
        if (key != "format" && key != "dimension" && key != "agents" && key != "events" && key != "states")
          error("/" + escape_pointer_token(key), "unknown field");
      read_quantum(root);
    }
    return finish();
  }

 private:
  using json = nlohmann::json;

  void error(std::string path, std::string message) {
    result_.report.issues.push_back({Severity::error, std::move(path), std::move(message)});
  }

  ReadResult finish() {
    if (!result_.report.empty()) {
      result_.model.reset();
      result_.classical.reset();
    }
    return std::move(result_);
  }

  static std::string child(const std::string& path, std::string_view key) {
    return path + "/" + escape_pointer_token(key);
  }
  static std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

  void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) error(child(path, key), "unknown field");
    }
  }

  std::optional<std::size_t> positive_integer(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() || j.get<std::size_t>() == 0) {
      error(path, "must be a positive integer");
      return std::nullopt;
    }
    return j.get<std::size_t>();
  }

  std::optional<GaussianRational> scalar(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) {
      error(path, "scalar must be a two-element array [\"re\", \"im\"]");
      return std::nullopt;
    }
    std::optional<Rational> parts[2];
    for (std::size_t k = 0; k < 2; ++k) {
      if (j[k].is_string()) parts[k] = parse_rational(j[k].get<std::string>());
      if (!parts[k]) error(child(path, k), "not a rational string of the form -?<digits>(/<digits>)?");
    }
    if (!parts[0] || !parts[1]) return std::nullopt;
    return GaussianRational(*parts[0], *parts[1]);
  }

  std::optional<Vector> vector(const json& j, const std::string& path, std::size_t dim) {
    if (!j.is_array()) {
      error(path, "vector must be an array of scalars");
      return std::nullopt;
    }
    if (j.size() != dim) {
      error(path, "vector has length " + std::to_string(j.size()) + ", dimension is " + std::to_string(dim));
      return std::nullopt;
    }
    Vector v(dim);
    bool ok = true;
    for (std::size_t k = 0; k < dim; ++k) {
      auto z = scalar(j[k], child(path, k));
      if (z) v[k] = *z;
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return v;
  }

  std::optional<Subspace> subspace(const json& j, const std::string& path, std::size_t dim) {
    if (!j.is_array()) {
      error(path, "subspace must be an array of spanning vectors");
      return std::nullopt;
    }
    std::vector<Vector> vectors;
    bool ok = true;
    for (std::size_t k = 0; k < j.size(); ++k) {
      auto v = vector(j[k], child(path, k), dim);
      if (v) vectors.push_back(std::move(*v));
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return canonicalize(vectors, dim);
  }

  std::optional<SpectralFamily> family(const json& j, const std::string& path, std::size_t dim) {
    if (!j.is_object() || !j.contains("blocks")) {
      error(path, "question must be an object with \"blocks\"");
      return std::nullopt;
    }
    check_keys(j, path, {"blocks"});
    const json& blocks = j["blocks"];
    const std::string blocks_path = child(path, "blocks");
    if (!blocks.is_array() || blocks.empty()) {
      error(blocks_path, "blocks must be a nonempty array");
      return std::nullopt;
    }

    std::vector<LabeledBlock> parsed;
    std::vector<std::string> paths;
    std::map<std::string, std::string> labels;
    bool ok = true;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const json& b = blocks[k];
      const std::string bpath = child(blocks_path, k);
      if (!b.is_object() || !b.contains("label") || !b.contains("vectors")) {
        error(bpath, "block must be an object with \"label\" and \"vectors\"");
        ok = false;
        continue;
      }
      check_keys(b, bpath, {"label", "vectors"});
      if (!b["label"].is_string()) {
        error(child(bpath, "label"), "label must be a string");
        ok = false;
        continue;
      }
      const std::string label = b["label"].get<std::string>();
      const auto [first, fresh] = labels.emplace(label, child(bpath, "label"));
      if (!fresh) {
        error(first->second, "duplicate block label '" + label + "'");
        error(child(bpath, "label"), "duplicate block label '" + label + "'");
        ok = false;
      }
      auto s = subspace(b["vectors"], child(bpath, "vectors"), dim);
      if (!s) {
        ok = false;
        continue;
      }
      if (s->is_zero()) {
        error(child(bpath, "vectors"), "block is the zero subspace");
        ok = false;
        continue;
      }
      parsed.push_back({label, std::move(*s)});
      paths.push_back(bpath);
    }
    if (!ok) return std::nullopt;

    for (std::size_t a = 0; a < parsed.size(); ++a)
      for (std::size_t b = a + 1; b < parsed.size(); ++b)
        if (!orthogonal(parsed[a].subspace, parsed[b].subspace)) {
          const std::string message =
              "blocks not orthogonal: '" + parsed[a].label + "' and '" + parsed[b].label + "'";
          error(paths[a], message);
          error(paths[b], message);
          ok = false;
        }
    std::size_t total = 0;
    for (const auto& b : parsed) total += b.subspace.rank();
    if (total != dim) {
      error(path, "family is incomplete: block ranks sum to " + std::to_string(total) + ", dimension is " +
                      std::to_string(dim));
      ok = false;
    }
    if (!ok) return std::nullopt;
    return SpectralFamily(std::move(parsed));
  }

  bool check_name(const std::string& name, const std::string& path) {
    if (is_valid_atom_name(name)) return true;
    error(path, "event name '" + name + "' is not a valid formula identifier");
    return false;
  }

  void read_quantum(const json& root) {
    if (!root.contains("dimension")) {
      error("/dimension", "missing field");
      return;
    }
    const auto dim = positive_integer(root["dimension"], "/dimension");
    if (!dim) return;

    std::vector<Agent> agents;
    bool ok = true;
    if (!root.contains("agents") || !root["agents"].is_array() || root["agents"].empty()) {
      error("/agents", "agents must be a nonempty array");
      ok = false;
    } else {
      std::map<std::string, std::string> ids;
      const json& list = root["agents"];
      for (std::size_t a = 0; a < list.size(); ++a) {
        const std::string apath = child("/agents", a);
        const json& aj = list[a];
        if (!aj.is_object() || !aj.contains("id") || !aj.contains("questions")) {
          error(apath, "agent must be an object with \"id\" and \"questions\"");
          ok = false;
          continue;
        }
        check_keys(aj, apath, {"id", "questions"});
        Agent agent;
        if (!aj["id"].is_string() || aj["id"].get<std::string>().empty()) {
          error(child(apath, "id"), "agent id must be a nonempty string");
          ok = false;
        } else {
          agent.id = aj["id"].get<std::string>();
          const auto [first, fresh] = ids.emplace(agent.id, child(apath, "id"));
          if (!fresh) {
            error(first->second, "duplicate agent id '" + agent.id + "'");
            error(child(apath, "id"), "duplicate agent id '" + agent.id + "'");
            ok = false;
          }
        }
        const json& qs = aj["questions"];
        const std::string qpath = child(apath, "questions");
        if (!qs.is_array() || qs.empty()) {
          error(qpath, "questions must be a nonempty array");
          ok = false;
          continue;
        }
        for (std::size_t q = 0; q < qs.size(); ++q) {
          auto f = family(qs[q], child(qpath, q), *dim);
          if (f) agent.questions.push_back(std::move(*f));
          else ok = false;
        }
        agents.push_back(std::move(agent));
      }
    }

    std::map<std::string, Subspace> events;
    if (root.contains("events")) {
      const json& ev = root["events"];
      if (!ev.is_object()) {
        error("/events", "events must be an object mapping names to spanning vectors");
        ok = false;
      } else {
        for (const auto& [name, value] : ev.items()) {
          const std::string path = child("/events", name);
          ok = check_name(name, path) && ok;
          auto s = subspace(value, path, *dim);
          if (s) events.emplace(name, std::move(*s));
          else ok = false;
        }
      }
    }

    std::map<std::string, Vector> states;
    if (root.contains("states")) {
      const json& st = root["states"];
      if (!st.is_object()) {
        error("/states", "states must be an object mapping names to vectors");
        ok = false;
      } else {
        for (const auto& [name, value] : st.items()) {
          const std::string path = child("/states", name);
          auto v = vector(value, path, *dim);
          if (!v) {
            ok = false;
          } else if (v->is_zero()) {
            error(path, "state must be nonzero");
            ok = false;
          } else {
            states.emplace(name, std::move(*v));
          }
        }
      }
    }

    if (ok) result_.model.emplace(*dim, std::move(agents), std::move(events), std::move(states));
  }

  std::optional<StateSet> state_set(const json& j, const std::string& path, std::size_t omega_size) {
    if (!j.is_array()) {
      error(path, "must be an array of state indices");
      return std::nullopt;
    }
    StateSet out;
    bool ok = true;
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_number_unsigned() || j[k].get<std::size_t>() >= omega_size) {
        error(child(path, k), "state index must be an integer in [0, " + std::to_string(omega_size) + ")");
        ok = false;
      } else if (!out.insert(j[k].get<std::size_t>()).second) {
        error(child(path, k), "state " + std::to_string(j[k].get<std::size_t>()) + " listed twice");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  void read_classical(const json& c) {
    const std::string path = "/classical";
    if (!c.is_object()) {
      error(path, "classical block must be an object");
      return;
    }
    check_keys(c, path, {"omega_size", "partitions", "events"});
    if (!c.contains("omega_size")) {
      error(child(path, "omega_size"), "missing field");
      return;
    }
    const auto n = positive_integer(c["omega_size"], child(path, "omega_size"));
    if (!n) return;

    bool ok = true;
    std::vector<ClassicalPartition> partitions;
    const std::string ppath = child(path, "partitions");
    if (!c.contains("partitions") || !c["partitions"].is_array() || c["partitions"].empty()) {
      error(ppath, "partitions must be a nonempty array");
      ok = false;
    } else {
      for (std::size_t i = 0; i < c["partitions"].size(); ++i) {
        const json& pj = c["partitions"][i];
        const std::string ipath = child(ppath, i);
        if (!pj.is_array() || pj.empty()) {
          error(ipath, "partition must be a nonempty array of blocks");
          ok = false;
          continue;
        }
        std::vector<StateSet> blocks;
        std::vector<std::size_t> owner(*n, pj.size());
        bool part_ok = true;
        for (std::size_t b = 0; b < pj.size(); ++b) {
          const std::string bpath = child(ipath, b);
          auto block = state_set(pj[b], bpath, *n);
          if (!block) {
            part_ok = false;
            continue;
          }
          if (block->empty()) {
            error(bpath, "partition block is empty");
            part_ok = false;
          }
          for (auto w : *block) {
            if (owner[w] != pj.size()) {
              error(bpath, "state " + std::to_string(w) + " already in block " + std::to_string(owner[w]));
              part_ok = false;
            }
            owner[w] = b;
          }
          blocks.push_back(std::move(*block));
        }
        if (part_ok)
          for (std::size_t w = 0; w < *n; ++w)
            if (owner[w] == pj.size()) {
              error(ipath, "state " + std::to_string(w) + " lies in no block");
              part_ok = false;
            }
        if (part_ok) partitions.emplace_back(*n, std::move(blocks));
        ok = ok && part_ok;
      }
    }

    std::map<std::string, StateSet> events;
    if (c.contains("events")) {
      const std::string epath = child(path, "events");
      if (!c["events"].is_object()) {
        error(epath, "events must be an object mapping names to state index arrays");
        ok = false;
      } else {
        for (const auto& [name, value] : c["events"].items()) {
          const std::string npath = child(epath, name);
          ok = check_name(name, npath) && ok;
          auto e = state_set(value, npath, *n);
          if (e) events.emplace(name, std::move(*e));
          else ok = false;
        }
      }
    }

    if (ok) {
      result_.classical.emplace(*n, std::move(partitions), std::move(events));
      result_.model.emplace(embed(*result_.classical));
    }
  }

  ReadResult result_;
};

inline nlohmann::ordered_json scalar_json(const GaussianRational& z) {
  return nlohmann::ordered_json::array({to_string(z.real()), to_string(z.imag())});
}

inline nlohmann::ordered_json vector_json(const Vector& v) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& z : v) out.push_back(scalar_json(z));
  return out;
}

inline nlohmann::ordered_json subspace_json(const Subspace& s) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& v : s.basis()) out.push_back(vector_json(v));
  return out;
}

}  // namespace detail

/// Parses JSON text. Throws ModelError (path "/") on malformed JSON.
inline ModelDocument parse_document(std::string_view text) {
  ModelDocument doc;
  try {
    doc.root = nlohmann::json::parse(text.begin(), text.end(), detail::DuplicateKeyTracker(doc.duplicate_keys));
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(ValidationReport{{{Severity::error, "", std::string("malformed JSON: ") + e.what()}}});
  }
  return doc;
}

/// Checks every structural and mathematical invariant of the document with
/// exact arithmetic.
inline ValidationReport validate(const ModelDocument& doc) { return detail::DocumentReader().read(doc).report; }

/// Loads and validates a model; classical documents yield their diagonal embedding.
inline Model load_model(std::string_view text) {
  auto result = detail::DocumentReader().read(parse_document(text));
  if (!result.report.empty()) throw ModelError(std::move(result.report));
  return std::move(*result.model);
}

/// The classical model of a classical document, or nullopt for quantum documents.
inline std::optional<ClassicalModel> load_classical_model(std::string_view text) {
  auto result = detail::DocumentReader().read(parse_document(text));
  if (!result.report.empty()) throw ModelError(std::move(result.report));
  return std::move(result.classical);
}

/// Canonical quantum-form JSON: subspaces as RREF bases, rationals in lowest
/// terms, events and states in name order.
inline std::string serialize(const Model& m) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["format"] = 1;
  doc["dimension"] = m.dimension();
  auto agents = ojson::array();
  for (const auto& agent : m.agents()) {
    auto questions = ojson::array();
    for (const auto& family : agent.questions) {
      auto blocks = ojson::array();
      for (const auto& b : family.blocks())
        blocks.push_back(ojson{{"label", b.label}, {"vectors", detail::subspace_json(b.subspace)}});
      questions.push_back(ojson{{"blocks", std::move(blocks)}});
    }
    agents.push_back(ojson{{"id", agent.id}, {"questions", std::move(questions)}});
  }
  doc["agents"] = std::move(agents);
  auto events = ojson::object();
  for (const auto& [name, s] : m.events()) events[name] = detail::subspace_json(s);
  doc["events"] = std::move(events);
  auto states = ojson::object();
  for (const auto& [name, v] : m.states()) states[name] = detail::vector_json(v);
  doc["states"] = std::move(states);
  return doc.dump(2) + "\n";
}

}  // namespace qknow
