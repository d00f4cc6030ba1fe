#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ugen/mpoly.hpp"

namespace ugen {
namespace {

/// Recursive-descent parser for the polynomial text grammar:
///   poly    := [sign] term { sign term }
///   term    := factor { '*' factor }
///   factor  := '(' number sign number '*i' ')' | number | ident ['^' uint]
class Parser {
 public:
  Parser(RingPtr ring, const std::string& text)
      : ring_(std::move(ring)), s_(text) {}

  MPoly parse() {
    MPoly out(ring_);
    skip_ws();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1.0 : 1.0;
    parse_term(out, sign);
    skip_ws();
    while (pos_ < s_.size()) {
      const char c = get();
      if (c != '+' && c != '-') fail("expected '+' or '-' between terms");
      parse_term(out, c == '-' ? -1.0 : 1.0);
      skip_ws();
    }
    return out;
  }

 private:
  void parse_term(MPoly& out, double sign) {
    Cx coeff(sign, 0.0);
    ExpVec exp(ring_->nvars(), 0);
    bool more = true;
    while (more) {
      skip_ws();
      const char c = peek();
      if (c == '(') {
        coeff *= parse_complex();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coeff *= parse_number();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::string name = parse_ident();
        const int v = ring_->var_index(name);
        if (v < 0) fail("unknown variable '" + name + "'");
        int e = 1;
        skip_ws();
        if (peek() == '^') {
          get();
          e = parse_uint();
        }
        if (exp[v] + e > 255) fail("exponent overflow");
        exp[v] = static_cast<std::uint8_t>(exp[v] + e);
      } else {
        fail("expected a factor");
      }
      skip_ws();
      if (peek() == '*') {
        get();
      } else {
        more = false;
      }
    }
    out.add_term(exp, coeff);
  }

  Cx parse_complex() {
    expect('(');
    const double re = parse_signed_number();
    skip_ws();
    const char s = get();
    if (s != '+' && s != '-') fail("expected sign in complex literal");
    double im = parse_signed_number();
    if (s == '-') im = -im;
    skip_ws();
    expect('*');
    skip_ws();
    if (get() != 'i') fail("expected 'i' in complex literal");
    skip_ws();
    expect(')');
    return Cx(re, im);
  }

  double parse_signed_number() {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += end - begin;
    return v;
  }

  double parse_number() {
    if (peek() == '+' || peek() == '-') fail("unexpected sign");
    return parse_signed_number();
  }

  int parse_uint() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent");
    int v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      v = v * 10 + (s_[pos_++] - '0');
    return v;
  }

  std::string parse_ident() {
    std::string name;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      name += s_[pos_++];
    return name;
  }

  void expect(char c) {
    if (get() != c) fail(std::string("expected '") + c + "'");
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("poly parse error at position " +
                                std::to_string(pos_) + ": " + msg);
  }

  RingPtr ring_;
  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

MPoly parse_poly(RingPtr ring, const std::string& text) {
  return Parser(std::move(ring), text).parse();
}

}  // namespace ugen
