// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/cli.hpp"

int main(int argc, char** argv) { return orbrot::cli::main_entry(argc, argv); }
