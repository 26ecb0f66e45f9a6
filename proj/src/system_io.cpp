#include "fracstab/system_io.hpp"

#include <fstream>
#include <sstream>

#include "fracstab/errors.hpp"
#include "fracstab/number_format.hpp"
#include "json.hpp"

namespace fracstab {

using nlohmann::json;

namespace {

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  int line = 1;
  for (std::size_t i = 0; i < byte; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

[[noreturn]] void schema_error(const std::string& field, const std::string& msg) {
  throw ParseError(field + ": " + msg, 0, field);
}

FracOrder parse_order(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return FracOrder::parse(j.get<std::string>());
    if (j.is_number_unsigned()) return FracOrder(static_cast<std::int64_t>(j.get<std::uint64_t>()), 1);
    if (j.is_number_integer()) return FracOrder(j.get<std::int64_t>(), 1);
  } catch (const ValidationError& e) {
    throw ValidationError(field + ": " + e.what());
  }
  schema_error(field, "order must be a decimal string such as \"0.5\" or an integer");
}

Coefficient parse_coefficient(const json& j, const std::string& field) {
  if (j.is_number()) return Coefficient::known(j.get<double>());
  if (!j.is_object()) schema_error(field, "coefficient must be a number or {\"param\": name, \"mult\": number}");
  for (const auto& [key, _] : j.items())
    if (key != "param" && key != "mult") schema_error(field + "." + key, "unexpected key");
  if (!j.contains("param") || !j["param"].is_string()) schema_error(field + ".param", "missing parameter name");
  double mult = 1.0;
  if (j.contains("mult")) {
    if (!j["mult"].is_number()) schema_error(field + ".mult", "multiplier must be a number");
    mult = j["mult"].get<double>();
  }
  return Coefficient::unknown(j["param"].get<std::string>(), mult);
}

QuasiPolynomial parse_polynomial(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) schema_error(field, "expected a non-empty list of terms");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tf = field + "[" + std::to_string(i) + "]";
    const auto& t = j[i];
    if (!t.is_object()) schema_error(tf, "term must be an object");
    for (const auto& [key, _] : t.items())
      if (key != "coeff" && key != "order") schema_error(tf + "." + key, "unexpected key");
    if (!t.contains("coeff")) schema_error(tf + ".coeff", "missing");
    if (!t.contains("order")) schema_error(tf + ".order", "missing");
    terms.push_back({parse_coefficient(t["coeff"], tf + ".coeff"), parse_order(t["order"], tf + ".order")});
  }
  try {
    return QuasiPolynomial(std::move(terms));
  } catch (const ValidationError& e) {
    throw ValidationError(field + ": " + e.what());
  }
}

void write_polynomial(std::ostringstream& os, const QuasiPolynomial& qp) {
  os << "[\n";
  for (std::size_t i = 0; i < qp.size(); ++i) {
    const auto& t = qp.terms()[i];
    os << "    {\"coeff\": ";
    if (t.coeff.is_known()) {
      os << format_double(t.coeff.value());
    } else {
      os << "{\"param\": " << json(t.coeff.unknown().name).dump() << ", \"mult\": "
         << format_double(t.coeff.unknown().multiplier) << "}";
    }
    os << ", \"order\": \"" << t.order.to_string() << "\"}" << (i + 1 < qp.size() ? ",\n" : "\n");
  }
  os << "  ]";
}

}  // namespace

FracSystem parse_system(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("syntax error at line " + std::to_string(line) + ": " + e.what(), line, "");
  }
  if (!doc.is_object()) schema_error("<root>", "system definition must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "denominator" && key != "numerator" && key != "gain") schema_error(key, "unexpected key");
  if (!doc.contains("denominator")) schema_error("denominator", "missing");

  FracSystem sys{parse_polynomial(doc["denominator"], "denominator")};
  if (doc.contains("numerator")) sys.numerator = parse_polynomial(doc["numerator"], "numerator");
  if (doc.contains("gain")) {
    if (!doc["gain"].is_number()) schema_error("gain", "must be a number");
    sys.gain = doc["gain"].get<double>();
  }
  sys.validate();
  return sys;
}

std::string serialize_system(const FracSystem& system) {
  std::ostringstream os;
  os << "{\n  \"denominator\": ";
  write_polynomial(os, system.denominator);
  os << ",\n  \"numerator\": ";
  write_polynomial(os, system.numerator);
  os << ",\n  \"gain\": " << format_double(system.gain) << "\n}\n";
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError("cannot read '" + path.string() + "'");
  return ss.str();
}

FracSystem load_system(const std::filesystem::path& path) { return parse_system(read_text_file(path)); }

}  // namespace fracstab
