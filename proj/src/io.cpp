#include "qcap/io.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcap::io {

namespace {

using nlohmann::json;

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail(const std::string& source, const std::string& what) {
  throw ChannelFileError(source + ": " + what, 0, 0);
}

Complex parse_entry(const json& e, const std::string& source, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  fail(source, where + ": expected a number or a [re, im] pair");
}

Matrix parse_matrix(const json& m, Index rows, Index cols, const std::string& source,
                    const std::string& where) {
  if (!m.is_array() || static_cast<Index>(m.size()) != rows) {
    fail(source, where + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = m[r];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      fail(source, where + " row " + std::to_string(r) + ": expected " +
                       std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      out(r, c) = parse_entry(row[c], source,
                              where + " entry (" + std::to_string(r) + ", " +
                                  std::to_string(c) + ")");
    }
  }
  return out;
}

Index positive_int(const json& doc, const char* key, const std::string& source) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long>() < 1) {
    fail(source, std::string("'") + key + "' must be a positive integer");
  }
  return static_cast<Index>(doc[key].get<long>());
}

}  // namespace

ChannelFile parse_channel_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw ChannelFileError(source + ":" + std::to_string(line) + ":" +
                               std::to_string(col) + ": " + msg,
                           line, col);
  }
  if (!doc.is_object()) fail(source, "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "name" && key != "dim_in" && key != "dim_out" && key != "kraus" &&
        key != "signals" && key != "metadata") {
      fail(source, "unknown key '" + key + "'");
    }
  }
  std::string name = doc.value("name", std::string());
  const Index din = positive_int(doc, "dim_in", source);
  const Index dout = positive_int(doc, "dim_out", source);
  if (!doc.contains("kraus") || !doc["kraus"].is_array() || doc["kraus"].empty()) {
    fail(source, "'kraus' must be a non-empty list of matrices");
  }
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < doc["kraus"].size(); ++k) {
    kraus.push_back(parse_matrix(doc["kraus"][k], dout, din, source,
                                 "kraus[" + std::to_string(k) + "]"));
  }
  std::optional<QuantumChannel> ch;
  try {
    ch = validate_channel(std::move(kraus));
  } catch (const InvariantError& e) {
    throw InvariantError(source + ": " + e.what(), e.defect());
  }
  std::optional<std::vector<PureState>> signals;
  if (doc.contains("signals")) {
    const json& s = doc["signals"];
    if (!s.is_array() || s.empty()) fail(source, "'signals' must be a non-empty list");
    signals.emplace();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "signals[" + std::to_string(i) + "]";
      if (!s[i].is_array() || static_cast<Index>(s[i].size()) != din) {
        fail(source, where + ": expected " + std::to_string(din) + " amplitudes");
      }
      Vector v(din);
      for (Index j = 0; j < din; ++j) v(j) = parse_entry(s[i][j], source, where);
      try {
        signals->push_back(PureState(v));
      } catch (const InvariantError& e) {
        throw InvariantError(source + ": " + where + ": " + e.what(), e.defect());
      }
    }
  }
  return ChannelFile{std::move(name), std::move(*ch), std::move(signals)};
}

ChannelFile parse_channel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChannelFileError("cannot open " + path.string(), 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_channel_text(ss.str(), path.string());
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string format_exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string format_complex(Complex z) {
  return "[" + format_exact(z.real()) + ", " + format_exact(z.imag()) + "]";
}

std::string channel_to_text(const std::string& name, const QuantumChannel& ch,
                            const std::optional<std::vector<PureState>>& signals) {
  std::ostringstream os;
  os << "{\n  \"name\": " << json(name).dump() << ",\n";
  os << "  \"dim_in\": " << ch.dim_in() << ",\n  \"dim_out\": " << ch.dim_out() << ",\n";
  os << "  \"kraus\": [\n";
  for (std::size_t k = 0; k < ch.kraus().size(); ++k) {
    const Matrix& a = ch.kraus()[k];
    os << "    [";
    for (Index r = 0; r < a.rows(); ++r) {
      os << (r ? ",\n     [" : "[");
      for (Index c = 0; c < a.cols(); ++c) os << (c ? ", " : "") << format_complex(a(r, c));
      os << "]";
    }
    os << "]" << (k + 1 < ch.kraus().size() ? "," : "") << "\n";
  }
  os << "  ]";
  if (signals) {
    os << ",\n  \"signals\": [\n";
    for (std::size_t i = 0; i < signals->size(); ++i) {
      const Vector& v = (*signals)[i].amplitudes();
      os << "    [";
      for (Index j = 0; j < v.size(); ++j) os << (j ? ", " : "") << format_complex(v(j));
      os << "]" << (i + 1 < signals->size() ? "," : "") << "\n";
    }
    os << "  ]";
  }
  os << "\n}\n";
  return os.str();
}

void Report::add(const std::string& key, const std::string& value) {
  fields_.emplace_back(key, value);
}

void Report::add(const std::string& key, double value) {
  fields_.emplace_back(key, format_number(value));
}

void Report::add_exact(const std::string& key, double value) {
  fields_.emplace_back(key, format_exact(value));
}

std::string Report::find(const std::string& key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  return {};
}

void write_report(std::ostream& os, const Report& r) {
  for (const auto& [k, v] : r.fields()) os << k << ": " << v << "\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::ostream& os, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << csv_field(row[i]);
  }
  os << '\n';
}

}  // namespace

void emit_csv(std::ostream& os, const CsvRow& header, const std::vector<CsvRow>& rows) {
  csv_line(os, header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw Error("csv row width does not match header");
    csv_line(os, r);
  }
}

void emit_csv(const std::filesystem::path& path, const CsvRow& header,
              const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  emit_csv(out, header, rows);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace qcap::io
