#pragma once

namespace convoarg::cli {

/// The convoarg command-line entry point. Shared by the binary and the
/// end-to-end tests so both drive the exact same code path.
int dispatch(int argc, const char* const* argv);

}  // namespace convoarg::cli
