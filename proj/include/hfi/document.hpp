#ifndef HFI_DOCUMENT_HPP
#define HFI_DOCUMENT_HPP

// JSON document format for model complexes: a strict schema (name,
// generators, differential, optional involution and metadata), a parser with
// line/column syntax errors, Maslov-grading inference for documents that omit
// the field, and a deterministic emitter whose output parses back to an
// equivalent document.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hfi/invariants.hpp"
#include "hfi/involution.hpp"
#include "hfi/model_complex.hpp"

namespace hfi {

class DocumentError : public std::runtime_error {
 public:
  explicit DocumentError(const std::string& what) : std::runtime_error(what) {}
};

struct DocGenerator {
  std::string name;
  int i = 0;
  int j = 0;
  std::optional<int> maslov;
  friend bool operator==(const DocGenerator&, const DocGenerator&) = default;
};

// One row of a term table: source generator and its formal sum of
// [target, upower] entries.
struct DocRow {
  std::string source;
  std::vector<std::pair<std::string, int>> terms;
  friend bool operator==(const DocRow&, const DocRow&) = default;
};

struct DocMetadata {
  std::optional<int> tau;
  std::optional<std::string> provenance;
  friend bool operator==(const DocMetadata&, const DocMetadata&) = default;
};

struct ComplexDocument {
  std::string name;
  std::vector<DocGenerator> generators;
  std::vector<DocRow> differential;
  std::optional<std::vector<DocRow>> involution;
  std::optional<DocMetadata> metadata;
  friend bool operator==(const ComplexDocument&, const ComplexDocument&) = default;
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline const ojson& expect_member(const ojson& obj, const std::string& key,
                                  const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw DocumentError("missing field '" + key + "' in " + where);
  return *it;
}

inline int expect_int(const ojson& v, const std::string& where) {
  if (!v.is_number_integer())
    throw DocumentError("expected an integer for " + where);
  return v.get<int>();
}

inline std::string expect_string(const ojson& v, const std::string& where) {
  if (!v.is_string())
    throw DocumentError("expected a string for " + where);
  return v.get<std::string>();
}

inline void reject_unknown_keys(const ojson& obj,
                                std::initializer_list<const char*> known,
                                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || (key == k);
    if (!ok) throw DocumentError("unknown field '" + key + "' in " + where);
  }
}

// Shared shape for the differential and involution blocks: an object mapping
// source names to arrays of [target, upower] pairs.
inline std::vector<DocRow> parse_rows(const ojson& obj, const std::string& where,
                                      bool nonnegative_upowers) {
  if (!obj.is_object())
    throw DocumentError("expected an object for " + where);
  std::vector<DocRow> rows;
  for (const auto& [source, value] : obj.items()) {
    if (!value.is_array())
      throw DocumentError("expected an array of [target, upower] pairs for " +
                          where + "." + source);
    DocRow row;
    row.source = source;
    for (const auto& entry : value) {
      if (!entry.is_array() || entry.size() != 2)
        throw DocumentError("expected a [target, upower] pair in " + where +
                            "." + source);
      std::string target = expect_string(entry[0], where + "." + source + " target");
      int upower = expect_int(entry[1], where + "." + source + " upower");
      if (nonnegative_upowers && upower < 0)
        throw DocumentError("negative upower in " + where + "." + source +
                            " (differentials store U-powers as nonnegative integers)");
      row.terms.emplace_back(std::move(target), upower);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ojson rows_to_json(const std::vector<DocRow>& rows) {
  ojson obj = ojson::object();
  for (const auto& row : rows) {
    ojson terms = ojson::array();
    for (const auto& [target, upower] : row.terms)
      terms.push_back(ojson::array({target, upower}));
    obj[row.source] = std::move(terms);
  }
  return obj;
}

inline std::string provenance_string(Provenance p) {
  switch (p) {
    case Provenance::staircase: return "staircase";
    case Provenance::mirror_staircase: return "mirror-staircase";
    case Provenance::thin: return "thin";
    case Provenance::user: return "user";
  }
  return "user";
}

}  // namespace detail

// Syntax and shape only: JSON text -> ComplexDocument.  Grading inference and
// semantic validation live in parse_complex_file.
inline ComplexDocument parse_complex_document(const std::string& text) {
  detail::ojson j;
  try {
    j = detail::ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(std::string("syntax error: ") + e.what());
  }
  if (!j.is_object())
    throw DocumentError("document root must be a JSON object");
  detail::reject_unknown_keys(
      j, {"name", "generators", "differential", "involution", "metadata"},
      "document");

  ComplexDocument doc;
  doc.name = detail::expect_string(detail::expect_member(j, "name", "document"),
                                   "document.name");

  const auto& gens = detail::expect_member(j, "generators", "document");
  if (!gens.is_array() || gens.empty())
    throw DocumentError("document.generators must be a non-empty array");
  for (const auto& g : gens) {
    if (!g.is_object())
      throw DocumentError("each generator must be an object");
    detail::reject_unknown_keys(g, {"name", "i", "j", "maslov"}, "generator");
    DocGenerator dg;
    dg.name = detail::expect_string(detail::expect_member(g, "name", "generator"),
                                    "generator.name");
    dg.i = detail::expect_int(detail::expect_member(g, "i", "generator '" + dg.name + "'"),
                              "generator '" + dg.name + "' field i");
    dg.j = detail::expect_int(detail::expect_member(g, "j", "generator '" + dg.name + "'"),
                              "generator '" + dg.name + "' field j");
    if (auto it = g.find("maslov"); it != g.end())
      dg.maslov = detail::expect_int(*it, "generator '" + dg.name + "' field maslov");
    doc.generators.push_back(std::move(dg));
  }

  doc.differential = detail::parse_rows(
      detail::expect_member(j, "differential", "document"), "differential",
      /*nonnegative_upowers=*/true);

  if (auto it = j.find("involution"); it != j.end())
    doc.involution = detail::parse_rows(*it, "involution",
                                        /*nonnegative_upowers=*/false);

  if (auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object())
      throw DocumentError("document.metadata must be an object");
    detail::reject_unknown_keys(*it, {"tau", "provenance"}, "metadata");
    DocMetadata meta;
    if (auto t = it->find("tau"); t != it->end())
      meta.tau = detail::expect_int(*t, "metadata.tau");
    if (auto p = it->find("provenance"); p != it->end())
      meta.provenance = detail::expect_string(*p, "metadata.provenance");
    doc.metadata = std::move(meta);
  }
  return doc;
}

// Document -> ModelComplex.  Requires every generator to carry a Maslov
// grading (parse_complex_file fills them in first).  Parsed complexes are
// always tagged as user-supplied: their involution comes from the document's
// involution block, never from the built-in dispatch.
inline ModelComplex to_model_complex(const ComplexDocument& doc) {
  ModelComplex c(doc.name);
  std::map<std::string, std::size_t> index;
  for (const auto& g : doc.generators) {
    if (!g.maslov)
      throw DocumentError("generator '" + g.name +
                          "' has no maslov grading; parse the document via "
                          "parse_complex_file to infer gradings");
    if (index.count(g.name))
      throw DocumentError("duplicate generator name '" + g.name + "'");
    index[g.name] = c.add_generator(g.name, g.i, g.j, *g.maslov);
  }
  for (const auto& row : doc.differential) {
    auto src = index.find(row.source);
    if (src == index.end())
      throw DocumentError("differential row for unknown generator '" +
                          row.source + "'");
    for (const auto& [target, upower] : row.terms) {
      auto tgt = index.find(target);
      if (tgt == index.end())
        throw DocumentError("differential of '" + row.source +
                            "' hits unknown generator '" + target + "'");
      if (upower < 0)
        throw DocumentError("negative upower in differential of '" +
                            row.source + "'");
      c.add_term(src->second, tgt->second, upower);
    }
  }
  c.set_provenance(Provenance::user);
  if (doc.metadata && doc.metadata->tau) c.set_tau(*doc.metadata->tau);
  return c;
}

// The document's involution block as a term table over the parsed complex.
inline std::optional<FilteredMorphism> document_involution(
    const ComplexDocument& doc, const ModelComplex& c) {
  if (!doc.involution) return std::nullopt;
  FilteredMorphism f(c.size());
  for (const auto& row : *doc.involution) {
    auto src = c.find(row.source);
    if (!src)
      throw DocumentError("involution row for unknown generator '" +
                          row.source + "'");
    for (const auto& [target, upower] : row.terms) {
      auto tgt = c.find(target);
      if (!tgt)
        throw DocumentError("involution of '" + row.source +
                            "' hits unknown generator '" + target + "'");
      f.add(*src, *tgt, upower);
    }
  }
  return f;
}

namespace detail {

// Assigns Maslov gradings to a document that omits them everywhere.  With tau
// metadata the thin convention M = i + j - tau applies directly; otherwise
// relative gradings are propagated along the differential (each U^k term
// forces M(target) = M(source) - 1 + 2k) and the global shift is pinned by
// normalizing the B-region tower bottom to grading zero.
inline void infer_maslov(ComplexDocument& doc) {
  if (doc.metadata && doc.metadata->tau) {
    for (auto& g : doc.generators) g.maslov = g.i + g.j - *doc.metadata->tau;
    return;
  }

  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < doc.generators.size(); ++k) {
    if (index.count(doc.generators[k].name))
      throw DocumentError("duplicate generator name '" +
                          doc.generators[k].name + "'");
    index[doc.generators[k].name] = k;
  }

  // Undirected propagation along differential terms.
  struct Edge {
    std::size_t other;
    int delta;  // M(other) - M(this)
  };
  std::vector<std::vector<Edge>> adj(doc.generators.size());
  for (const auto& row : doc.differential) {
    auto src = index.find(row.source);
    if (src == index.end())
      throw DocumentError("differential row for unknown generator '" +
                          row.source + "'");
    for (const auto& [target, upower] : row.terms) {
      auto tgt = index.find(target);
      if (tgt == index.end())
        throw DocumentError("differential of '" + row.source +
                            "' hits unknown generator '" + target + "'");
      int delta = -1 + 2 * upower;  // M(tgt) = M(src) - 1 + 2*upower
      adj[src->second].push_back({tgt->second, delta});
      adj[tgt->second].push_back({src->second, -delta});
    }
  }

  std::vector<std::optional<int>> maslov(doc.generators.size());
  maslov[0] = doc.generators[0].i + doc.generators[0].j;  // provisional seed
  std::vector<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t at = queue.back();
    queue.pop_back();
    for (const auto& e : adj[at]) {
      int want = *maslov[at] + e.delta;
      if (!maslov[e.other]) {
        maslov[e.other] = want;
        queue.push_back(e.other);
      } else if (*maslov[e.other] != want) {
        throw DocumentError(
            "differential implies inconsistent maslov gradings at generator '" +
            doc.generators[e.other].name + "'");
      }
    }
  }
  for (std::size_t k = 0; k < maslov.size(); ++k)
    if (!maslov[k])
      throw DocumentError(
          "cannot infer maslov gradings: the differential does not connect "
          "generator '" + doc.generators[k].name +
          "' to the rest; add maslov fields or tau metadata");

  for (std::size_t k = 0; k < doc.generators.size(); ++k)
    doc.generators[k].maslov = *maslov[k];
  ModelComplex provisional = to_model_complex(doc);
  ModelComplex pinned = normalize_maslov(provisional);
  int shift = pinned.generators()[0].maslov - provisional.generators()[0].maslov;
  for (auto& g : doc.generators) *g.maslov += shift;
}

}  // namespace detail

// Full pipeline for input files: parse, infer gradings when absent, build the
// complex, and run the structural validators (forwarding their findings).
// The returned document always carries explicit Maslov gradings.
inline ComplexDocument parse_complex_file(const std::string& text) {
  ComplexDocument doc = parse_complex_document(text);

  std::size_t with = 0;
  for (const auto& g : doc.generators)
    if (g.maslov) ++with;
  if (with == 0)
    detail::infer_maslov(doc);
  else if (with != doc.generators.size())
    throw DocumentError(
        "either all generators must carry a maslov grading or none may");

  ModelComplex c = to_model_complex(doc);
  auto vr = validate_complex(c);
  if (!vr.ok) {
    std::string msg = "invalid complex";
    for (const auto& issue : vr.issues) msg += "; " + issue;
    throw DocumentError(msg);
  }
  if (auto iota = document_involution(doc, c)) {
    auto ir = verify_involution(c, *iota);
    if (!ir.ok()) {
      std::string msg = "involution block fails verification";
      for (const auto& issue : ir.issues) msg += "; " + issue;
      throw DocumentError(msg);
    }
  }
  return doc;
}

// ModelComplex (+ optional involution) -> document.  Differential rows are
// emitted only for generators with nonzero differential; involution rows are
// emitted for every generator.
inline ComplexDocument document_from_model(const ModelComplex& c,
                                           const FilteredMorphism* iota = nullptr) {
  ComplexDocument doc;
  doc.name = c.name();
  for (const auto& g : c.generators())
    doc.generators.push_back({g.name, g.i, g.j, g.maslov});
  for (std::size_t src = 0; src < c.size(); ++src) {
    if (c.differential()[src].empty()) continue;
    DocRow row;
    row.source = c.generators()[src].name;
    for (const auto& t : c.differential()[src])
      row.terms.emplace_back(c.generators()[t.target].name, t.upower);
    doc.differential.push_back(std::move(row));
  }
  if (iota) {
    std::vector<DocRow> rows;
    for (std::size_t src = 0; src < c.size(); ++src) {
      DocRow row;
      row.source = c.generators()[src].name;
      for (const auto& t : iota->terms()[src])
        row.terms.emplace_back(c.generators()[t.target].name, t.upower);
      rows.push_back(std::move(row));
    }
    doc.involution = std::move(rows);
  }
  DocMetadata meta;
  if (c.tau()) meta.tau = *c.tau();
  meta.provenance = detail::provenance_string(c.provenance());
  doc.metadata = std::move(meta);
  return doc;
}

// Deterministic serialization: fixed key order, two-space indent, trailing
// newline.  parse_complex_file(emit_document(doc)) == doc for any document
// whose gradings are explicit.
inline std::string emit_document(const ComplexDocument& doc) {
  detail::ojson j;
  j["name"] = doc.name;
  detail::ojson gens = detail::ojson::array();
  for (const auto& g : doc.generators) {
    detail::ojson o;
    o["name"] = g.name;
    o["i"] = g.i;
    o["j"] = g.j;
    if (g.maslov) o["maslov"] = *g.maslov;
    gens.push_back(std::move(o));
  }
  j["generators"] = std::move(gens);
  j["differential"] = detail::rows_to_json(doc.differential);
  if (doc.involution) j["involution"] = detail::rows_to_json(*doc.involution);
  if (doc.metadata) {
    detail::ojson meta = detail::ojson::object();
    if (doc.metadata->tau) meta["tau"] = *doc.metadata->tau;
    if (doc.metadata->provenance) meta["provenance"] = *doc.metadata->provenance;
    j["metadata"] = std::move(meta);
  }
  return j.dump(2) + "\n";
}

}  // namespace hfi

#endif  // HFI_DOCUMENT_HPP
