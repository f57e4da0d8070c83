// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rewkit {

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string &msg) : std::runtime_error(msg) {}
};

struct SingularInput : std::runtime_error {
    explicit SingularInput(const std::string &msg) : std::runtime_error(msg) {}
};

struct DegenerateParameters : std::runtime_error {
    explicit DegenerateParameters(const std::string &msg) : std::runtime_error(msg) {}
};

struct NotAProjector : std::runtime_error {
    explicit NotAProjector(const std::string &msg) : std::runtime_error(msg) {}
};

struct NotApplicable : std::runtime_error {
    explicit NotApplicable(const std::string &msg) : std::runtime_error(msg) {}
};

struct NotAWitness : std::runtime_error {
    explicit NotAWitness(const std::string &msg) : std::runtime_error(msg) {}
};

struct InvalidState : std::runtime_error {
    explicit InvalidState(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace rewkit
