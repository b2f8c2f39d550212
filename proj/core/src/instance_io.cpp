#include "fleetsup/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fleetsup {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return std::string(buf, end);
}

void write_instance(std::ostream& out, const StaticSnapshot& snapshot) {
  const std::size_t m = snapshot.vertex_count();
  out << snapshot.robot_count() << '\n';
  for (std::size_t v = 0; v < m; ++v) out << v << ' ' << format_double(snapshot.reward(v)) << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) out << i << ' ' << j << ' ' << format_double(snapshot.cost(i, j)) << '\n';
    }
  }
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw InstanceFormatError(std::string("unexpected end of input, expected ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InstanceFormatError("line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

double parse_number(const std::string& token, const LineReader& reader) {
  if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) reader.fail("bad number '" + token + "'");
  return value;
}

}  // namespace

StaticSnapshot read_instance(std::istream& in) {
  LineReader reader(in);
  std::size_t n = 0;
  {
    auto ls = reader.next("robot count");
    if (!(ls >> n)) reader.fail("bad robot count");
  }
  const std::size_t m = n + 2;
  std::vector<double> rewards(m, 0.0);
  for (std::size_t v = 0; v < m; ++v) {
    auto ls = reader.next("reward line");
    std::size_t id = 0;
    std::string tok;
    if (!(ls >> id >> tok) || id != v) reader.fail("expected reward line for vertex " + std::to_string(v));
    rewards[v] = parse_number(tok, reader);
  }
  std::vector<double> costs(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      auto ls = reader.next("cost line");
      std::size_t from = 0, to = 0;
      std::string tok;
      if (!(ls >> from >> to >> tok) || from != i || to != j) {
        reader.fail("expected cost line " + std::to_string(i) + " " + std::to_string(j));
      }
      costs[i * m + j] = parse_number(tok, reader);
    }
  }
  try {
    return StaticSnapshot(n, std::move(rewards), std::move(costs));
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError(e.what());
  }
}

StaticSnapshot read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceFormatError("cannot open " + path);
  try {
    return read_instance(in);
  } catch (const InstanceFormatError& e) {
    throw InstanceFormatError(path + ": " + e.what());
  }
}

}  // namespace fleetsup
