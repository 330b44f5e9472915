#include "ceerlab/spec_text.hpp"

#include <cctype>
#include <sstream>

#include "ceerlab/errors.hpp"

namespace ceerlab {

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t col = 1;

  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line, col); }

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  char take() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_space() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) take();
  }

  void expect(char c) {
    skip_space();
    if (done() || peek() != c) fail(std::string("expected '") + c + "'");
    take();
  }

  std::uint64_t natural() {
    skip_space();
    if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a natural number");
    std::uint64_t v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      std::uint64_t d = static_cast<std::uint64_t>(peek() - '0');
      if (v > (UINT64_MAX - d) / 10) fail("number out of range");
      v = v * 10 + d;
      take();
    }
    return v;
  }

  std::string symbol() {
    skip_space();
    std::string s;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) {
      s.push_back(take());
    }
    if (s.empty()) fail("expected a spec name");
    return s;
  }
};

std::vector<std::uint64_t> parse_braced_set(Cursor& cur) {
  cur.expect('{');
  std::vector<std::uint64_t> out;
  cur.skip_space();
  if (!cur.done() && cur.peek() == '}') {
    cur.take();
    return out;
  }
  out.push_back(cur.natural());
  cur.skip_space();
  while (!cur.done() && cur.peek() == ',') {
    cur.take();
    out.push_back(cur.natural());
    cur.skip_space();
  }
  cur.expect('}');
  return out;
}

CeerSpec parse_node(Cursor& cur) {
  cur.expect('(');
  std::string name = cur.symbol();
  CeerSpec spec;
  if (name == "id") {
    spec = CeerSpec::id_omega_spec();
  } else if (name == "idn") {
    spec = CeerSpec::id_n_spec(cur.natural());
  } else if (name == "mod") {
    spec = CeerSpec::mod_spec(cur.natural());
  } else if (name == "intervals") {
    std::vector<std::uint64_t> sizes;
    sizes.push_back(cur.natural());
    cur.skip_space();
    while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      sizes.push_back(cur.natural());
      cur.skip_space();
    }
    spec = CeerSpec::intervals_spec(std::move(sizes));
  } else if (name == "uni") {
    spec = CeerSpec::uni_set_spec(parse_braced_set(cur));
  } else if (name == "uni-ce") {
    spec = CeerSpec::uni_ce_spec(cur.natural());
  } else if (name == "pairs") {
    spec = CeerSpec::from_pairs_spec(cur.natural());
  } else if (name == "cyl") {
    spec = CeerSpec::cylindrify_spec(parse_node(cur));
  } else if (name == "join") {
    CeerSpec left = parse_node(cur);
    spec = CeerSpec::uniform_join_spec(std::move(left), parse_node(cur));
  } else if (name == "restrict") {
    CeerSpec inner = parse_node(cur);
    spec = CeerSpec::restrict_spec(std::move(inner), cur.natural());
  } else {
    cur.fail("unknown spec name '" + name + "'");
  }
  cur.expect(')');
  return spec;
}

void print_node(const CeerSpec& spec, std::ostringstream& out) {
  using Kind = CeerSpec::Kind;
  switch (spec.kind) {
    case Kind::id_omega:
      out << "(id)";
      return;
    case Kind::id_n:
      out << "(idn " << spec.param << ")";
      return;
    case Kind::mod:
      out << "(mod " << spec.param << ")";
      return;
    case Kind::intervals:
      out << "(intervals";
      for (std::uint64_t s : spec.numbers) out << ' ' << s;
      out << ")";
      return;
    case Kind::uni_set: {
      out << "(uni {";
      for (std::size_t i = 0; i < spec.numbers.size(); ++i) {
        if (i > 0) out << ',';
        out << spec.numbers[i];
      }
      out << "})";
      return;
    }
    case Kind::uni_ce:
      out << "(uni-ce " << spec.param << ")";
      return;
    case Kind::from_pairs:
      out << "(pairs " << spec.param << ")";
      return;
    case Kind::cylindrify:
      out << "(cyl ";
      print_node(spec.children[0], out);
      out << ")";
      return;
    case Kind::uniform_join:
      out << "(join ";
      print_node(spec.children[0], out);
      out << ' ';
      print_node(spec.children[1], out);
      out << ")";
      return;
    case Kind::restrict_to:
      out << "(restrict ";
      print_node(spec.children[0], out);
      out << ' ' << spec.param << ")";
      return;
  }
}

}  // namespace

CeerSpec parse_spec(std::string_view text) {
  Cursor cur{text};
  CeerSpec spec = parse_node(cur);
  cur.skip_space();
  if (!cur.done()) cur.fail("trailing input after spec");
  validate(spec);
  return spec;
}

std::string print_spec(const CeerSpec& spec) {
  std::ostringstream out;
  print_node(spec, out);
  return out.str();
}

}  // namespace ceerlab
