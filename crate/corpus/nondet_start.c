int main() {
    int x = nondet_int();
    int y = 0;
    assume(x >= 0 && x <= 10);
    while (y < 50 && nondet_int()) {
        y = y + 1;
    }
    assert(x >= y);
    return 0;
}
