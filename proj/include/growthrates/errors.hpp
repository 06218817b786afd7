#pragma once

#include <stdexcept>
#include <string>

namespace growthrates {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct DegenerateMatrixError : Error {
  using Error::Error;
};

struct InfeasibleError : Error {
  using Error::Error;
};

struct ScaleLimitError : Error {
  using Error::Error;
};

struct DivergedError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace growthrates
