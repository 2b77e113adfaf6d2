#include <cstdio>
int main(){ std::puts("plcrf placeholder"); return 0; }
