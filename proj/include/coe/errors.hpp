#pragma once

#include <stdexcept>
#include <string>

namespace coe {

/// Base class of every error raised by the library. The CLI maps subclasses
/// onto process exit codes.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class UnsupportedKernel : public Error
{
public:
  using Error::Error;
};

/// |mu_hat(xi) + nu| fell below the safe floor.
class DegenerateSymbol : public Error
{
public:
  using Error::Error;
};

class SingularResolvent : public Error
{
public:
  using Error::Error;
};

class SymbolBlowup : public Error
{
public:
  using Error::Error;
};

/// Every sampled tuple had a vanishing Rademacher denominator.
class DegenerateSample : public Error
{
public:
  using Error::Error;
};

class ConditionNotChecked : public Error
{
public:
  using Error::Error;
};

class ConditionFailed : public Error
{
public:
  using Error::Error;
};

class BlowUp : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

} // namespace coe
