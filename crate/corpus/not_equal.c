int main() {
    int x = 1, y = 0;
    while (y < 100 && nondet_int()) {
        x = x + 2;
        y = y + 1;
    }
    assert(x != y);
    return 0;
}
