#pragma once

#include <stdexcept>
#include <string>

namespace suprelax {

//! @brief Operand lies outside the domain of an operation (e.g. log of a nonpositive range)
class DomainError : public std::domain_error
{
public:
  explicit DomainError( const std::string& what ): std::domain_error( what ) {}
};

//! @brief Malformed argument (size mismatch, point outside a box, bad ratio, ...)
class ArgumentError : public std::invalid_argument
{
public:
  explicit ArgumentError( const std::string& what ): std::invalid_argument( what ) {}
};

//! @brief A priori bound does not intersect the relaxation range
class InfeasibleBound : public std::runtime_error
{
public:
  explicit InfeasibleBound( const std::string& what ): std::runtime_error( what ) {}
};

//! @brief Inconsistent neural-network model (shape chain, activation)
class ModelError : public std::runtime_error
{
public:
  explicit ModelError( const std::string& what ): std::runtime_error( what ) {}
};

} // namespace suprelax
