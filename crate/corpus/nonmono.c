// y moves by a nondet step that may be negative
int main() {
    int d = nondet_int();
    int y = 0, i = 0;
    assume(d >= -1 && d <= 1);
    while (i < 60 && nondet_int()) {
        y = y + d;
        i = i + 1;
    }
    assert(y >= -20);
    return 0;
}
