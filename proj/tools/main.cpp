// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    return azero::cli::run(argc, argv, std::cout, std::cerr);
}
