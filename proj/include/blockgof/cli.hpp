#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blockgof/block_models.hpp"

namespace blockgof {

/// "a(1+b*diag)", a bare constant "c", or a path to a k x k CSV file.
BlockMatrix parse_block_spec(const std::string& spec, int k);

/// Entry point behind the blockgof executable. Returns the process exit
/// code: 0 on completion (test decisions live in the output), 1 on runtime
/// failures, 2 on usage or configuration errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blockgof
