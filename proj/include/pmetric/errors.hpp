/*
 * Copyright 2026 The pmetric Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmetric {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent model file. `position()` is a byte offset into
/// the input when the problem is syntactic, npos otherwise.
class ModelError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit ModelError(const std::string& what, std::size_t position = npos)
        : Error(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Formula text that does not parse, or parses to something ill-sorted.
class FormulaError : public Error {
public:
    enum class Kind { Syntax, LiteralOutOfRange, SortMismatch };

    FormulaError(Kind kind, const std::string& what, std::size_t position)
        : Error(what + " at offset " + std::to_string(position)),
          kind_(kind),
          position_(position) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// An enumeration or graph exploration ran past its configured cap.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace pmetric
