#include <cstdio>

#include "sdl/acceptance.hpp"

int main() { return sdl::run_acceptance(stdout) ? 0 : 1; }
