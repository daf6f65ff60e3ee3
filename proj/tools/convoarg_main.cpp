#include "convoarg/cli.hpp"

int main(int argc, char** argv) { return convoarg::cli::dispatch(argc, argv); }
