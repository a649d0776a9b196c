int main() {
    int n = nondet_int();
    int s = 0, i = 0;
    assume(n >= 0 && n <= 30);
    while (i < n) {
        s = s + i;
        i = i + 1;
    }
    assert(s <= 200);
    return 0;
}
