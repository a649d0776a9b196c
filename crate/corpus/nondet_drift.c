int main() {
    int x = nondet_int();
    int y = 0;
    assume(x >= -3 && x <= 3);
    while (y < 20 && nondet_int()) {
        x = x + 2;
        y = y + 1;
    }
    assert(x >= y);
    return 0;
}
