#pragma once

#include "pdq/fiber.hpp"
#include "pdq/form.hpp"
#include "pdq/series.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdq {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// Printed coordinate names: x, y for n = 1, else x1..xn, y1..yn.
std::vector<std::string> coordinate_names(int n);

// Grammar: sums, products, quotients by constants, integer powers with '^',
// parentheses, integers, identifiers. 't' is the deformation parameter and 'i'
// the imaginary unit. Coordinates accept x1..xn, y1..yn, and x, y when n = 1.
TSeries parse_series(std::string_view text, int n, int order);
Scalar parse_scalar(std::string_view text);

std::string format_poly(const Poly &p, int n);
std::string format_series(const TSeries &s, int n);
std::string format_form(const BaseForm &f);
// Fiber generators print as X1.., Y1.. (X, Y when n = 1).
std::string format_fiber(const FiberElement &a);

} // namespace pdq
