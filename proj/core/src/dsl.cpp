#include "karamata/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "karamata/errors.hpp"

namespace karamata {
namespace dsl {

namespace {

struct Parser {
  const std::string& src;
  const CheckConfig& cfg;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) {
      ++pos;
    }
  }

  [[noreturn]] void fail(const std::string& expected) {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos && i < src.size(); ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << col << ": expected "
       << expected;
    if (pos >= src.size()) {
      os << ", found end of input";
    } else {
      os << ", found '" << src[pos] << "'";
    }
    throw ParseError(os.str(), line, col, expected);
  }

  void expect(char c, const std::string& what) {
    skip_ws();
    if (pos >= src.size() || src[pos] != c) fail(what);
    ++pos;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '_')) {
      ++pos;
    }
    if (pos == start) fail("a function or catalog name");
    return src.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    size_t start = pos;
    if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
    bool digits = false;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '.')) {
      digits = digits || std::isdigit(static_cast<unsigned char>(src[pos]));
      ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      while (pos < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[pos]))) {
        ++pos;
      }
    }
    if (!digits) {
      pos = start;
      fail("a decimal number");
    }
    const std::string text = src.substr(start, pos - start);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
      pos = start;
      fail("a decimal number");
    }
    return v;
  }

  Expr unary(Expr (*make)(Expr)) {
    expect('(', "'('");
    Expr e = expr();
    expect(')', "')'");
    return make(std::move(e));
  }

  Expr binary(Expr (*make)(Expr, Expr)) {
    expect('(', "'('");
    Expr lhs = expr();
    expect(',', "','");
    Expr rhs = expr();
    expect(')', "')'");
    return make(std::move(lhs), std::move(rhs));
  }

  Expr with_number(Expr (*make)(Expr, double)) {
    expect('(', "'('");
    Expr e = expr();
    expect(',', "','");
    const double x = number();
    expect(')', "')'");
    return make(std::move(e), x);
  }

  Expr expr() {
    skip_ws();
    const size_t at = pos;
    const std::string name = ident();
    if (name == "one") return Expr::one();
    if (name == "logp") return Expr::logp();
    if (name == "loglogp") return Expr::loglogp();
    if (name == "expsqrtlog") return Expr::expsqrtlog();
    if (name == "const") {
      expect('(', "'('");
      const double k = number();
      expect(')', "')'");
      return Expr::constant(k);
    }
    if (name == "pow") return with_number(&Expr::pow);
    if (name == "add") return binary(&Expr::add);
    if (name == "mul") return binary(&Expr::mul);
    if (name == "div") return binary(&Expr::div);
    if (name == "recip") return unary(&Expr::recip_arg);
    if (name == "truncl") return unary(&Expr::trunc_left);
    if (name == "truncr") return unary(&Expr::trunc_right);
    if (name == "shift") {
      expect('(', "'('");
      Expr e = expr();
      expect(',', "','");
      const double t1 = number();
      expect(')', "')'");
      return Expr::shift_arg(std::move(e), t1, cfg);
    }
    if (name == "tilde") return unary(&Expr::tilde);
    if (name == "hat") return unary(&Expr::hat);
    if (name == "tildesup") return unary(&Expr::tilde_sup);
    if (name == "hatsup") return unary(&Expr::hat_sup);
    if (name == "winc") return with_number(&Expr::witness_inc);
    if (name == "wdec") return with_number(&Expr::witness_dec);
    pos = at;
    fail("one of: one, const, logp, loglogp, expsqrtlog, pow, add, mul, div, "
         "recip, truncl, truncr, shift, tilde, hat, tildesup, hatsup, winc, "
         "wdec");
  }
};

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

Expr parse(const std::string& src, const CheckConfig& cfg) {
  Parser p{src, cfg};
  Expr e = p.expr();
  p.skip_ws();
  if (p.pos != src.size()) p.fail("end of input");
  return e;
}

std::string print(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::kConst:
      return e.param() == 1.0 ? "one" : "const(" + format_number(e.param()) + ")";
    case NodeKind::kLogP:
      return "logp";
    case NodeKind::kLogLogP:
      return "loglogp";
    case NodeKind::kExpSqrtLog:
      return "expsqrtlog";
    case NodeKind::kPow:
      return "pow(" + print(e.child()) + "," + format_number(e.param()) + ")";
    case NodeKind::kAdd:
      return "add(" + print(e.child(0)) + "," + print(e.child(1)) + ")";
    case NodeKind::kMul:
      return "mul(" + print(e.child(0)) + "," + print(e.child(1)) + ")";
    case NodeKind::kDiv:
      return "div(" + print(e.child(0)) + "," + print(e.child(1)) + ")";
    case NodeKind::kRecipArg:
      return "recip(" + print(e.child()) + ")";
    case NodeKind::kTruncLeft:
      return "truncl(" + print(e.child()) + ")";
    case NodeKind::kTruncRight:
      return "truncr(" + print(e.child()) + ")";
    case NodeKind::kShiftArg:
      return "shift(" + print(e.child()) + "," + format_number(e.param()) + ")";
    case NodeKind::kTilde:
      return "tilde(" + print(e.child()) + ")";
    case NodeKind::kHat:
      return "hat(" + print(e.child()) + ")";
    case NodeKind::kTildeSup:
      return "tildesup(" + print(e.child()) + ")";
    case NodeKind::kHatSup:
      return "hatsup(" + print(e.child()) + ")";
    case NodeKind::kWitnessInc:
      return "winc(" + print(e.child()) + "," + format_number(e.param()) + ")";
    case NodeKind::kWitnessDec:
      return "wdec(" + print(e.child()) + "," + format_number(e.param()) + ")";
  }
  throw Error("print: unreachable");
}

}  // namespace dsl
}  // namespace karamata
