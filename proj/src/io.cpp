#include "ultra/io.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace ultra {

using ordered_json = nlohmann::ordered_json;

Rat parse_rational(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational");
  std::size_t slash = s.find('/');
  auto check_int = [&](const std::string& part, bool allow_sign) {
    if (part.empty()) throw ParseError("malformed rational '" + s + "'");
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) throw ParseError("malformed rational '" + s + "'");
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw ParseError("malformed rational '" + s +
                         "' (exact integers or num/den only)");
  };
  Rat q;
  if (slash == std::string::npos) {
    check_int(s, true);
    q = Rat(s[0] == '+' ? s.substr(1) : s);
  } else {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    check_int(num, true);
    check_int(den, false);
    if (num[0] == '+') num = num.substr(1);
    if (Int(den) == 0) throw ParseError("zero denominator in '" + s + "'");
    q = Rat(num + "/" + den);
  }
  q.canonicalize();
  return q;
}

std::string format_rational(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

Rat rational_field(const ordered_json& j, const char* what) {
  if (!j.is_string())
    throw ParseError(std::string(what) +
                     ": rationals must be strings like \"3\" or \"-1/2\"");
  return parse_rational(j.get<std::string>());
}

std::optional<Model> parse_model(const std::string& s) {
  if (s == "flexible") return Model::FlexibleLattice;
  if (s == "fixed-lattice") return Model::FixedLattice;
  if (s == "fixed-volume") return Model::FixedVolume;
  return std::nullopt;
}

}  // namespace

FrameworkFile parse_framework_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  FrameworkFile file;
  Framework& fw = file.framework;
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw ParseError("missing integer field 'dim'");
  int d = j["dim"].get<int>();
  if (d < 1) throw ParseError("'dim' must be positive");

  if (!j.contains("vertices") || !j["vertices"].is_array() ||
      j["vertices"].empty())
    throw ParseError("missing nonempty 'vertices' array");
  int n = static_cast<int>(j["vertices"].size());
  fw.positions.assign(n, RatVec(d));
  std::vector<char> seen(n, 0);
  for (const auto& v : j["vertices"]) {
    if (!v.contains("id") || !v["id"].is_number_integer())
      throw ParseError("vertex missing integer 'id'");
    int id = v["id"].get<int>();
    if (id < 0 || id >= n || seen[id])
      throw ParseError("vertex ids must be 0..n-1 and unique");
    seen[id] = 1;
    if (!v.contains("p") || !v["p"].is_array() ||
        static_cast<int>(v["p"].size()) != d)
      throw ParseError("vertex 'p' must be a length-dim array");
    for (int i = 0; i < d; ++i)
      fw.positions[id][i] = rational_field(v["p"][i], "vertex position");
  }

  if (!j.contains("lattice") || !j["lattice"].is_array() ||
      static_cast<int>(j["lattice"].size()) != d)
    throw ParseError("'lattice' must be a dim x dim array of rows");
  fw.lattice.assign(d, RatVec(d));
  for (int r = 0; r < d; ++r) {
    const auto& row = j["lattice"][r];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw ParseError("'lattice' must be a dim x dim array of rows");
    for (int c = 0; c < d; ++c)
      fw.lattice[r][c] = rational_field(row[c], "lattice entry");
  }

  fw.graph.d = d;
  fw.graph.n_vertices = n;
  if (!j.contains("edges") || !j["edges"].is_array())
    throw ParseError("missing 'edges' array");
  for (const auto& e : j["edges"]) {
    if (!e.contains("tail") || !e.contains("head") || !e.contains("gamma"))
      throw ParseError("edge needs 'tail', 'head', 'gamma'");
    Edge edge;
    edge.tail = e["tail"].get<int>();
    edge.head = e["head"].get<int>();
    if (!e["gamma"].is_array() || static_cast<int>(e["gamma"].size()) != d)
      throw ParseError("edge 'gamma' must be a length-dim integer array");
    edge.color = GammaVector(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      if (!e["gamma"][i].is_number_integer())
        throw ParseError("edge colors must be integers");
      edge.color[i] = e["gamma"][i].get<std::int64_t>();
    }
    fw.graph.edges.push_back(std::move(edge));
  }

  if (j.contains("model")) {
    file.model = parse_model(j["model"].get<std::string>());
    if (!file.model)
      throw ParseError("unknown model '" + j["model"].get<std::string>() +
                       "'");
  }

  auto errors = validate(fw.graph);
  if (!errors.empty()) throw ParseError(errors.front());
  return file;
}

FrameworkFile load_framework(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_framework_text(buf.str());
}

std::string serialize_framework(const FrameworkFile& file) {
  const Framework& fw = file.framework;
  ordered_json j;
  j["dim"] = fw.graph.d;
  j["vertices"] = ordered_json::array();
  for (int v = 0; v < fw.graph.n_vertices; ++v) {
    ordered_json jv;
    jv["id"] = v;
    jv["p"] = ordered_json::array();
    for (const Rat& x : fw.positions[v]) jv["p"].push_back(format_rational(x));
    j["vertices"].push_back(jv);
  }
  j["lattice"] = ordered_json::array();
  for (const auto& row : fw.lattice) {
    ordered_json jr = ordered_json::array();
    for (const Rat& x : row) jr.push_back(format_rational(x));
    j["lattice"].push_back(jr);
  }
  j["edges"] = ordered_json::array();
  for (const Edge& e : fw.graph.edges) {
    ordered_json je;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["gamma"] = ordered_json::array();
    for (std::size_t i = 0; i < e.color.dim(); ++i)
      je["gamma"].push_back(e.color[i]);
    j["edges"].push_back(je);
  }
  if (file.model) j["model"] = model_name(*file.model);
  return j.dump(2) + "\n";
}

std::string decide_report(const Framework& fw, Model model,
                          const Verdict& verdict, const DecideOptions& opts) {
  ordered_json j;
  j["command"] = "decide";
  j["model"] = model_name(model);
  j["verdict"] = verdict_name(verdict.kind);
  if (verdict.witness) {
    ordered_json w;
    w["context_order"] = verdict.witness->N;
    w["k"] = verdict.witness->k;
    w["order"] = verdict.witness->order();
    w["nullity"] = verdict.witness_nullity;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  ordered_json base;
  base["S"] = verdict.base.rank_S;
  if (verdict.base.rank_S_fixed_volume)
    base["S_fixed_volume"] = *verdict.base.rank_S_fixed_volume;
  else
    base["S_fixed_volume"] = nullptr;
  base["Shat_at_one"] = verdict.base.rank_Shat_at_one;
  base["required"] = verdict.base.required;
  base["passed"] = verdict.base.passed;
  j["base_ranks"] = base;
  j["dimension"] = fw.graph.d;
  j["vertices"] = fw.graph.n_vertices;
  j["edges"] = fw.graph.n_edges();
  j["color_weight_D"] = verdict.bound_used.D.get_str();
  j["C_hat"] = rat_to_decimal(verdict.bound_used.C_hat, 30);
  j["N0"] = verdict.bound_used.N0.get_str();
  j["N_checked"] = verdict.n_checked;
  j["N_skipped"] = verdict.n_skipped;
  j["points_checked"] = verdict.points_checked;
  j["points_skipped"] = verdict.points_skipped;
  j["galois_reduced"] = opts.galois_reduced;
  j["seed"] = opts.seed;
  j["threads"] = opts.threads;
  return j.dump(2) + "\n";
}

std::string rat_to_decimal(const Rat& q, int digits) {
  if (q == 0) return "0";
  mpf_class f(q, static_cast<unsigned>(digits * 4 + 64));
  mp_exp_t exp10 = 0;
  std::string mant = f.get_str(exp10, 10, static_cast<std::size_t>(digits));
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant = mant.substr(1);
  }
  std::ostringstream os;
  os << sign << mant[0];
  if (mant.size() > 1) os << "." << mant.substr(1);
  os << "e" << (exp10 - 1);
  return os.str();
}

std::string rum_table(const std::vector<RumPoint>& spectrum, int d) {
  std::ostringstream os;
  for (int i = 1; i <= d; ++i) os << "k" << i << "/N\t";
  os << "nullity\n";
  for (const RumPoint& pt : spectrum) {
    for (int i = 0; i < d; ++i) {
      std::uint64_t k = pt.omega.k[i] % pt.omega.N;
      std::uint64_t g = std::gcd(k, pt.omega.N);
      if (k == 0)
        os << "0\t";
      else
        os << (k / g) << "/" << (pt.omega.N / g) << "\t";
    }
    os << pt.nullity << "\n";
  }
  return os.str();
}

}  // namespace ultra
