#pragma once

#include <iosfwd>

namespace smdtn::cli {

/// Entry point for `smdtn ingest|run|batch`. Returns the process exit code:
/// 0 ok, 1 I/O, 2 config/parse, 3 runtime.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smdtn::cli
