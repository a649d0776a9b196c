int main() {
    int s = 0, i = 0;
    while (i < 100 && nondet_int()) {
        s = s + 2;
        i = i + 1;
    }
    assert(s >= i);
    return 0;
}
