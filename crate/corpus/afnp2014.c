#include <assert.h>
int main() {
    int x = 1, y = 0;
    while (y < 1000
            && __VERIFIER_nondet_int()) {
        x = x + y;
        y = y + 1;
    }
    assert(x >= y);
    return 0;
}
