#pragma once

namespace qplpf::cli {

int run(int argc, const char* const* argv);

} // namespace qplpf::cli
