#include <cstdio>
int main() { std::puts("idtsim cli placeholder"); return 0; }
