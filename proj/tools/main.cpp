#include <cstdio>
int main() { std::puts("splitlab: cli not wired yet"); return 0; }
