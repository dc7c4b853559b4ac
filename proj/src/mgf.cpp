#include "setnovo/mgf.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace setnovo::mgf {
namespace {

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

// "2+", "+2", or "2"
bool parse_charge(const std::string& s, int& out) {
  std::string t = s;
  if (!t.empty() && t.back() == '+') t.pop_back();
  if (!t.empty() && t.front() == '+') t.erase(t.begin());
  if (t.empty()) return false;
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || v <= 0) return false;
  out = v;
  return true;
}

}  // namespace

ParseResult parse(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;

  bool inside = false;
  bool broken = false;  // current record already reported, skip to END IONS
  bool saw_pepmass = false;
  Spectrum cur;
  std::size_t begin_line = 0;

  auto fail = [&](const std::string& msg) {
    result.errors.push_back({lineno, msg});
    broken = true;
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty()) continue;

    if (!inside) {
      if (s == "BEGIN IONS") {
        inside = true;
        broken = false;
        saw_pepmass = false;
        cur = Spectrum{};
        begin_line = lineno;
      }
      continue;
    }

    if (s == "BEGIN IONS") {
      result.errors.push_back(
          {lineno, "BEGIN IONS inside an open record (started at line " +
                       std::to_string(begin_line) + ")"});
      broken = false;
      saw_pepmass = false;
      cur = Spectrum{};
      begin_line = lineno;
      continue;
    }

    if (s == "END IONS") {
      if (!broken) {
        if (!saw_pepmass) {
          result.errors.push_back({lineno, "record missing PEPMASS"});
        } else if (cur.charge <= 0) {
          result.errors.push_back({lineno, "record missing CHARGE"});
        } else {
          result.spectra.push_back(std::move(cur));
        }
      }
      inside = false;
      continue;
    }

    if (broken) continue;

    std::size_t eq = s.find('=');
    if (eq != std::string::npos &&
        !std::isdigit(static_cast<unsigned char>(s[0])) && s[0] != '.' &&
        s[0] != '-') {
      std::string key = s.substr(0, eq);
      std::string value = strip(s.substr(eq + 1));
      if (key == "TITLE") {
        cur.title = value;
      } else if (key == "PEPMASS") {
        // may carry an intensity after the m/z
        std::string first = value.substr(0, value.find_first_of(" \t"));
        if (!parse_double(first, cur.pepmass) || cur.pepmass <= 0.0)
          fail("bad PEPMASS value '" + value + "'");
        else
          saw_pepmass = true;
      } else if (key == "CHARGE") {
        if (!parse_charge(value, cur.charge))
          fail("bad CHARGE value '" + value + "'");
      } else if (key == "SCANS") {
        long v = 0;
        auto [ptr, ec] =
            std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size())
          fail("bad SCANS value '" + value + "'");
        else
          cur.scan = v;
      } else if (key == "SEQ") {
        try {
          cur.seq = chem::parse_peptide(value);
          cur.has_seq = true;
        } catch (const std::invalid_argument& e) {
          fail("bad SEQ '" + value + "': " + e.what());
        }
      }
      // other headers (RTINSECONDS etc.) are ignored
      continue;
    }

    std::istringstream ps(s);
    double mz = 0.0, intensity = 0.0;
    if (!(ps >> mz >> intensity)) {
      fail("bad peak line '" + s + "'");
      continue;
    }
    cur.peaks.push_back({mz, intensity});
  }

  if (inside && !broken)
    result.errors.push_back(
        {lineno, "unterminated record (started at line " +
                     std::to_string(begin_line) + ")"});
  return result;
}

ParseResult parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open MGF file: " + path);
  return parse(in);
}

void write(std::ostream& out, const std::vector<Spectrum>& spectra) {
  char buf[64];
  for (const Spectrum& sp : spectra) {
    out << "BEGIN IONS\n";
    if (!sp.title.empty()) out << "TITLE=" << sp.title << "\n";
    std::snprintf(buf, sizeof buf, "%.5f", sp.pepmass);
    out << "PEPMASS=" << buf << "\n";
    out << "CHARGE=" << sp.charge << "+\n";
    if (sp.scan >= 0) out << "SCANS=" << sp.scan << "\n";
    if (sp.has_seq) out << "SEQ=" << chem::peptide_to_string(sp.seq) << "\n";
    for (const Peak& p : sp.peaks) {
      std::snprintf(buf, sizeof buf, "%.5f %.1f", p.mz, p.intensity);
      out << buf << "\n";
    }
    out << "END IONS\n";
  }
}

void write_file(const std::string& path, const std::vector<Spectrum>& spectra) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write MGF file: " + path);
  write(out, spectra);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace setnovo::mgf
