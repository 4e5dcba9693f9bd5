#include "forms_impl.hpp"

namespace tmcalc {

std::vector<int> mask_slots(Mask a) {
    std::vector<int> out;
    while (a) {
        out.push_back(std::countr_zero(a));
        a &= a - 1;
    }
    return out;
}

Mask mask_of(const std::vector<int>& slots) {
    Mask out = 0;
    for (int s : slots) out |= slot_bit(s);
    return out;
}

int wedge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int inversions = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        inversions += std::popcount(a >> (j + 1));
    }
    return inversions % 2 ? -1 : 1;
}

TMCALC_INSTANTIATE_FORMS(ScalarExpr)

} // namespace tmcalc
