/*
 * Copyright 2026 The fil Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fil/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

namespace fil {

struct Expression::Node {
  enum class Kind { number, var, neg, add, sub, mul, div, pow, sin, cos, exp };
  Kind kind = Kind::number;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(double v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return n;
}

NodePtr make(Node::Kind k, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw InputError(fmt::format("expression '{}': {} at position {}", s_, what, pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr a = term();
    for (;;) {
      if (eat('+')) a = make(Node::Kind::add, a, term());
      else if (eat('-')) a = make(Node::Kind::sub, a, term());
      else return a;
    }
  }

  NodePtr term() {
    NodePtr a = unary();
    for (;;) {
      if (eat('*')) a = make(Node::Kind::mul, a, unary());
      else if (eat('/')) a = make(Node::Kind::div, a, unary());
      else return a;
    }
  }

  // Unary minus binds looser than '^': -x^2 is -(x^2).
  NodePtr unary() {
    if (eat('-')) return make(Node::Kind::neg, unary());
    if (eat('+')) return unary();
    NodePtr base = primary();
    if (eat('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return make(Node::Kind::var, nullptr);
      if (name == "pi") return leaf(std::numbers::pi);
      Node::Kind k;
      if (name == "sin") k = Node::Kind::sin;
      else if (name == "cos") k = Node::Kind::cos;
      else if (name == "exp") k = Node::Kind::exp;
      else {
        pos_ = start;
        fail("unknown identifier");
      }
      if (!eat('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return make(k, arg);
    }
    fail("unexpected character");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string lit = s_.substr(start, pos_ - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(lit, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != lit.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return leaf(v);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double x) {
  switch (n.kind) {
    case Node::Kind::number: return n.value;
    case Node::Kind::var: return x;
    case Node::Kind::neg: return -eval(*n.lhs, x);
    case Node::Kind::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Node::Kind::sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Node::Kind::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Node::Kind::div: return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Node::Kind::pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
    case Node::Kind::sin: return std::sin(eval(*n.lhs, x));
    case Node::Kind::cos: return std::cos(eval(*n.lhs, x));
    case Node::Kind::exp: return std::exp(eval(*n.lhs, x));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_).parse();
  return e;
}

double Expression::operator()(double x) const { return eval(*root_, x); }

GridFunction Expression::sample(const GridSpec& grid) const {
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    v[i] = (*this)(grid.node(i));
    if (!std::isfinite(v[i])) {
      throw InputError(fmt::format("expression '{}' is not finite at x = {}", text_, grid.node(i)));
    }
  }
  return GridFunction(grid, std::move(v));
}

}  // namespace fil
