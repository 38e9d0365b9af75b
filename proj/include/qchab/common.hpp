#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace qchab {

using Int = mpz_class;
using Rat = mpq_class;

// Violated internal invariant: a bug in this library, never a data problem.
// The CLI maps this to exit code 2.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

// Structurally invalid input (bad JSON document, schema violation, inconsistent
// ingested data).  The CLI maps this to exit code 1.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad command-line usage.  Exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonInvariantSubspace : InternalError {
    explicit NonInvariantSubspace(const std::string& msg) : InternalError(msg) {}
};

// Polynomial with a real root and a non-real root: neither totally real nor CM.
// Cannot arise from weight-2 Hecke data; signals bad ingested input.
struct MixedSignatureError : std::runtime_error {
    explicit MixedSignatureError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonSquarefreeError : std::runtime_error {
    explicit NonSquarefreeError(const std::string& msg) : std::runtime_error(msg) {}
};

#define QCHAB_CHECK(cond, msg)                                        \
    do {                                                              \
        if (!(cond)) throw ::qchab::InternalError(std::string(msg));  \
    } while (0)

}  // namespace qchab
