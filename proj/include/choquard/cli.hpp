#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chq {

//! Commands: classify | thresholds | solve | fiber | hscan | gn | verify | probe.
//! Flags: --config PATH, --out DIR, --threads K, --state PATH.
//! Exit status: 0 ok, 2 invalid input, 3 numerical failure, 4 side condition violated.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

} // namespace chq
