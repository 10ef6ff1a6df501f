// Walk through the main objects for a small mapping torus.
#include "skeinrt/tqft.hpp"

#include <iostream>

using namespace skeinrt;

int main()
{
    const i64 k = 4;

    // product-to-sum in the torus skein algebra
    std::cout << "(1,0)*(0,1) = " << product_to_sum(CurveLabel(1, 0), CurveLabel(0, 1)).str() << "\n";

    // reduce a curve in M_k to the horizontal basis
    const SkeinVector v(CurveLabel(0, 4));
    const auto red = reduce_horizontal_k(v, k);
    std::cout << "(0,4) in M_" << k << " reduces to " << red.value.str() << " in " << red.trace.size() << " steps\n";

    // RT invariants at xi = e^{i pi / r}: trace vs closed form
    for (i64 r : {7, 8, 9}) {
        const RootOfUnity xi(2 * r, 1);
        std::cout << "r=" << r << "  RT(M_4, (0,4)) = " << rt_invariant_trace(k, v, xi)
                  << "  RT(M_4, reduced) = " << rt_invariant_trace(k, red.value, xi)
                  << "  RT(M_4, (1,0)) trace " << rt_invariant_trace(k, SkeinVector(CurveLabel(1, 0)), xi) << " closed "
                  << rt_closed_Tl(k, 1, xi) << "\n";
    }

    // an exact Gauss sum and its closed form
    const RootOfUnity z(12, 5);
    const auto cf = gauss_closed(3, 4, z);
    std::cout << "G(3,4) at " << z.str() << " = " << gauss_value(3, 4, z) << " (closed form item " << cf.item
              << ", exact match " << (cf.to_group_ring(z).equals(gauss_brute(3, 4, z)) ? "yes" : "no") << ")\n";
}
