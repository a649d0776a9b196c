unsigned int x = nondet_uint();
unsigned int y = nondet_uint();
__ESBMC_assume(x <= 20);
assert(x >= y);
