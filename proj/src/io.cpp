#include "mos/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace mos::io {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_rows(std::string& out, const Grid2D& g, const std::vector<double>& v,
                 const std::string& indent) {
  out += "[\n";
  for (std::size_t j = 0; j < g.ny; ++j) {
    out += indent + "  ";
    for (std::size_t i = 0; i < g.nx; ++i) {
      append_number(out, v[g.index(i, j)]);
      if (i + 1 < g.nx || j + 1 < g.ny) out += i + 1 < g.nx ? ", " : ",";
    }
    out += '\n';
  }
  out += indent + "]";
}

std::vector<double> payload(const std::string& name, const ScalarField& f, const NodeMask& mask) {
  std::vector<double> v(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!mask.valid(k)) {
      v[k] = 0.0;
      continue;
    }
    if (!std::isfinite(f[k]))
      fail(ErrorKind::Numerical,
           "field '" + name + "' index " + std::to_string(k) + " is not finite");
    v[k] = f[k];
  }
  return v;
}

ojson seed_json(const SeedSpec& s) {
  ojson j;
  j["family"] = std::string(to_string(s.family));
  j["qn"] = s.qn;
  j["alpha0"] = s.alpha0;
  j["v"] = s.v;
  j["a"] = s.a;
  j["c1"] = s.c1;
  return j;
}

ojson backlund_json(const BacklundSource& b) {
  ojson j;
  j["m"] = b.m;
  j["bianchi_darboux"] = b.bianchi_darboux;
  if (b.bianchi_darboux) {
    j["omega0"] = b.omega0;
    j["phi0"] = b.phi0;
  } else {
    j["init"] = {b.init[0], b.init[1], b.init[2], b.init[3], b.init[4]};
  }
  return j;
}

std::size_t line_of(std::string_view text, std::size_t pos) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// Tracks the position inside the document so that errors can name the
// field and element index.
class Locator : public nlohmann::json_sax<json> {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  std::string error;

  bool null() override { return bad_value("null"); }
  bool boolean(bool) override { return scalar(false); }
  bool number_integer(number_integer_t) override { return scalar(true); }
  bool number_unsigned(number_unsigned_t) override { return scalar(true); }
  bool number_float(number_float_t v, const string_t&) override {
    if (!std::isfinite(v)) return bad_value("a non-finite number");
    return scalar(true);
  }
  bool string(string_t&) override { return scalar(false); }
  bool binary(binary_t&) override { return scalar(false); }
  bool start_object(std::size_t) override {
    stack_.push_back({true, "", 0});
    return true;
  }
  bool key(string_t& k) override {
    stack_.back().key = k;
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    advance();
    return true;
  }
  bool start_array(std::size_t) override {
    stack_.push_back({false, "", 0});
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    advance();
    return true;
  }
  bool parse_error(std::size_t pos, const std::string& token,
                   const nlohmann::detail::exception&) override {
    error = "syntax error at line " + std::to_string(line_of(text_, pos)) + " near '" + token +
            "'" + where();
    return false;
  }

 private:
  struct Frame {
    bool object;
    std::string key;
    std::size_t index;
  };

  bool in_payload() const {
    return stack_.size() == 3 && !stack_[2].object && stack_[1].object &&
           (stack_[0].key == "fields" || stack_[0].key == "mask");
  }
  bool in_mask() const {
    return stack_.size() == 2 && !stack_[1].object && stack_[0].key == "mask";
  }
  std::string where() const {
    if (stack_.size() >= 3 && !stack_[2].object && stack_[0].key == "fields")
      return " (field '" + stack_[1].key + "' index " + std::to_string(stack_[2].index) + ")";
    if (stack_.size() >= 2 && !stack_[1].object && stack_[0].key == "mask")
      return " (field 'mask' index " + std::to_string(stack_[1].index) + ")";
    return "";
  }
  bool scalar(bool numeric) {
    if (!numeric && (in_payload() || in_mask())) return bad_value("a non-number");
    advance();
    return true;
  }
  bool bad_value(const std::string& what) {
    if (in_payload() || in_mask()) {
      error = "found " + what + where() + "; payload entries must be finite numbers";
      return false;
    }
    advance();
    return true;
  }
  void advance() {
    if (!stack_.empty() && !stack_.back().object) ++stack_.back().index;
  }

  std::string_view text_;
  std::vector<Frame> stack_;
};

template <class T>
T get(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorKind::Parse, std::string("missing '") + key + "' in " + where);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::Parse, std::string("'") + key + "' in " + where + " has the wrong type");
  }
}

ScalarField read_payload(const json& fields, const char* name, const Grid2D& g) {
  auto it = fields.find(name);
  if (it == fields.end() || !it->is_array())
    fail(ErrorKind::Parse, std::string("missing field '") + name + "'");
  if (it->size() != g.size())
    fail(ErrorKind::Parse, std::string("field '") + name + "' has " + std::to_string(it->size()) +
                               " values, grid needs " + std::to_string(g.size()));
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (*it)[k].get<double>();
  return ScalarField(g, std::move(v));
}

}  // namespace

std::string serialize(const FieldFile& f) {
  const GoverningFields& gf = f.fields;
  const Grid2D& g = gf.grid();
  std::string out = "{\n";
  auto line = [&](const std::string& key, const ojson& v) {
    out += "  \"" + key + "\": " + v.dump() + ",\n";
  };
  line("format", std::string(kFormat));
  line("version", std::string(kVersion));
  line("kind", std::string(to_string(gf.kind)));
  line("qn", gf.qn);
  ojson grid;
  grid["nx"] = g.nx;
  grid["ny"] = g.ny;
  grid["x0"] = g.x0;
  grid["y0"] = g.y0;
  grid["dx"] = g.dx;
  grid["dy"] = g.dy;
  line("grid", grid);
  if (f.seed) line("seed", seed_json(*f.seed));
  if (f.backlund) line("backlund", backlund_json(*f.backlund));
  out += "  \"fields\": {\n";
  const std::pair<const char*, const ScalarField*> named[] = {
      {"alpha", &gf.alpha}, {"xi", &gf.xi}, {"h", &gf.h}};
  for (std::size_t n = 0; n < 3; ++n) {
    out += std::string("    \"") + named[n].first + "\": ";
    append_rows(out, g, payload(named[n].first, *named[n].second, gf.mask), "    ");
    out += n + 1 < 3 ? ",\n" : "\n";
  }
  out += "  }";
  if (!gf.mask.empty()) {
    out += ",\n  \"mask\": ";
    std::vector<double> m(g.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = gf.mask.valid(k) ? 1.0 : 0.0;
    append_rows(out, g, m, "  ");
  }
  out += "\n}\n";
  return out;
}

FieldFile parse(std::string_view text) {
  Locator loc(text);
  if (!json::sax_parse(text.begin(), text.end(), &loc)) {
    fail(ErrorKind::Parse, loc.error.empty() ? "malformed field file" : loc.error);
  }
  const json doc = json::parse(text.begin(), text.end());
  if (!doc.is_object()) fail(ErrorKind::Parse, "field file must be a JSON object");
  if (get<std::string>(doc, "format", "header") != kFormat)
    fail(ErrorKind::Parse, "not a " + std::string(kFormat) + " file");
  const std::string version = get<std::string>(doc, "version", "header");
  if (version != kVersion) fail(ErrorKind::Parse, "unsupported format version " + version);

  FieldFile f;
  GoverningFields& gf = f.fields;
  gf.kind = parse_kind(get<std::string>(doc, "kind", "header"));
  gf.qn = get<double>(doc, "qn", "header");
  const json grid = get<json>(doc, "grid", "header");
  Grid2D g;
  g.nx = get<std::size_t>(grid, "nx", "grid");
  g.ny = get<std::size_t>(grid, "ny", "grid");
  g.x0 = get<double>(grid, "x0", "grid");
  g.y0 = get<double>(grid, "y0", "grid");
  g.dx = get<double>(grid, "dx", "grid");
  g.dy = get<double>(grid, "dy", "grid");
  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Parse, std::string("invalid grid: ") + e.what());
  }
  const json fields = get<json>(doc, "fields", "header");
  gf.alpha = read_payload(fields, "alpha", g);
  gf.xi = read_payload(fields, "xi", g);
  gf.h = read_payload(fields, "h", g);
  if (doc.contains("mask")) {
    const json& m = doc["mask"];
    if (!m.is_array() || m.size() != g.size())
      fail(ErrorKind::Parse, "mask must have one entry per node");
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double v = m[k].get<double>();
      if (v != 0.0 && v != 1.0)
        fail(ErrorKind::Parse, "mask index " + std::to_string(k) + " must be 0 or 1");
      if (v == 0.0) gf.mask.flag(k, g.size());
    }
  }
  try {
    gf.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Parse, e.what());
  }

  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    SeedSpec spec;
    spec.family = parse_family(get<std::string>(s, "family", "seed"));
    spec.qn = get<double>(s, "qn", "seed");
    spec.alpha0 = get<double>(s, "alpha0", "seed");
    spec.v = get<double>(s, "v", "seed");
    spec.a = get<double>(s, "a", "seed");
    spec.c1 = get<double>(s, "c1", "seed");
    spec.grid = g;
    f.seed = spec;
  }
  if (doc.contains("backlund")) {
    const json& b = doc["backlund"];
    BacklundSource src;
    src.m = get<double>(b, "m", "backlund");
    src.bianchi_darboux = get<bool>(b, "bianchi_darboux", "backlund");
    if (src.bianchi_darboux) {
      src.omega0 = get<double>(b, "omega0", "backlund");
      src.phi0 = get<double>(b, "phi0", "backlund");
    } else {
      const auto init = get<std::vector<double>>(b, "init", "backlund");
      if (init.size() != 5) fail(ErrorKind::Parse, "backlund init must have 5 entries");
      for (int i = 0; i < 5; ++i) src.init[i] = init[i];
    }
    f.backlund = src;
  }
  return f;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::InvalidInput, "write to '" + path.string() + "' failed");
}

void write_field_file(const std::filesystem::path& path, const FieldFile& f) {
  write_text(path, serialize(f));
}

FieldFile read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::size_t write_obj(const std::filesystem::path& path, const Vec3Field& v,
                      const NodeMask& flags) {
  const Grid2D& g = v.grid();
  const std::size_t n = g.size();
  std::vector<std::size_t> id(n, 0);
  std::string out;
  std::size_t next = 1;
  char buf[160];
  for (std::size_t k = 0; k < n; ++k) {
    if (!flags.valid(k) || !v[k].allFinite()) continue;
    id[k] = next++;
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[k][0], v[k][1], v[k][2]);
    out += buf;
  }
  std::size_t faces = 0;
  for (std::size_t j = 0; j + 1 < g.ny; ++j)
    for (std::size_t i = 0; i + 1 < g.nx; ++i) {
      const std::size_t a = id[g.index(i, j)], b = id[g.index(i + 1, j)];
      const std::size_t c = id[g.index(i + 1, j + 1)], d = id[g.index(i, j + 1)];
      if (!a || !b || !c || !d) continue;
      std::snprintf(buf, sizeof buf, "f %zu %zu %zu\nf %zu %zu %zu\n", a, b, c, a, c, d);
      out += buf;
      faces += 2;
    }
  if (faces == 0)
    fail(ErrorKind::Numerical, "no valid grid cell left for mesh '" + path.string() + "'");
  write_text(path, out);
  return faces;
}

void write_table(const std::filesystem::path& path, const SurfaceTriple& s,
                 const CoefficientFields& c, const StressFields& t) {
  const Grid2D& g = c.grid();
  std::string out =
      "x,y,r_x,r_y,r_z,N_x,N_y,N_z,rbar_x,rbar_y,rbar_z,A1,A2,Ho,Ko,T1,T2\n";
  auto num = [&](double v) {
    if (std::isnan(v)) {
      out += "nan";
    } else {
      append_number(out, v);
    }
  };
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      num(g.x(i));
      out += ',';
      num(g.y(j));
      for (const Vec3Field* f : {&s.r, &s.N, &s.rbar})
        for (int d = 0; d < 3; ++d) {
          out += ',';
          num((*f)[k][d]);
        }
      for (const ScalarField* f : {&c.A1, &c.A2, &c.Ho, &c.Ko, &t.T1, &t.T2}) {
        out += ',';
        num((*f)[k]);
      }
      out += '\n';
    }
  write_text(path, out);
}

}  // namespace mos::io
