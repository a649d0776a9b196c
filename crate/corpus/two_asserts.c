int main() {
    int a = 0, b = 1000;
    while (a < 300 && nondet_int()) {
        a = a + 3;
        b = b - 1;
    }
    assert(a <= b);
    assert(a >= 0);
    return 0;
}
