int main() {
    int x = -1, y = 0;
    while (y < 1000 && nondet_int()) {
        x = x - y;
        y = y + 1;
    }
    assert(x <= -y);
    return 0;
}
