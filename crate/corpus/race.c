int main() {
    int x = 0, y = 0;
    while (x < 500 && nondet_int()) {
        x = x + 1;
        y = y + 2;
    }
    assert(x >= y);
    return 0;
}
