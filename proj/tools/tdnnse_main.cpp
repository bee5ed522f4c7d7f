// tools/tdnnse_main.cpp
// Placeholder main; replaced by the full CLI below.
int main() { return 0; }
