/*
* Copyright (C) 2026 The dualsim Authors
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
#ifndef DUALSIM_ERROR_HPP
#define DUALSIM_ERROR_HPP

#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>

namespace dualsim
{

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, invalid configuration documents or violated preconditions on inputs.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Failures while a simulation or analysis is running.
class EngineError : public Error
{
public:
    using Error::Error;
};

/// A rate expression evaluated outside its mathematical domain (e.g. ln T at T <= 0).
class DomainError : public EngineError
{
public:
    using EngineError::EngineError;
};

/// A rate expression that is not representable as a finite double.
class OverflowError : public EngineError
{
public:
    using EngineError::EngineError;
};

/// A discrete population grew past the configured cap.
class PopulationCapError : public EngineError
{
public:
    using EngineError::EngineError;
};

/// Wraps an error raised inside one ensemble replicate.
class ReplicateError : public EngineError
{
public:
    ReplicateError(std::size_t index, std::uint64_t seed, const std::string& what, std::exception_ptr cause)
        : EngineError("replicate " + std::to_string(index) + " (seed " + std::to_string(seed) + "): " + what)
        , m_index(index)
        , m_seed(seed)
        , m_cause(std::move(cause))
    {
    }

    std::size_t index() const
    {
        return m_index;
    }
    std::uint64_t seed() const
    {
        return m_seed;
    }
    const std::exception_ptr& cause() const
    {
        return m_cause;
    }

private:
    std::size_t m_index;
    std::uint64_t m_seed;
    std::exception_ptr m_cause;
};

/// File system failures while emitting outputs.
class IoError : public Error
{
public:
    using Error::Error;
};

} // namespace dualsim

#endif // DUALSIM_ERROR_HPP
