// Builds a genus-2 curve with split Jacobian, certifies it at small primes,
// and looks at one of its elliptic factors.

#include <iostream>

#include "isoforge/isoforge.hpp"

using namespace isoforge;

int main()
{
    auto c = build_scholten(1, 2, 3, 4);
    std::cout << "C_{1,2,3,4}: lambda = " << c.lambda() << ", smooth = " << std::boolalpha << c.is_smooth() << "\n";

    auto cert = verify_split_jacobian(c, primes_up_to(50));
    std::cout << "point counts match E1 x E2 at " << cert.entries.size() << " primes: "
              << (cert.verdict ? "yes" : "no") << "\n";
    for (const auto &x : cert.excluded)
        std::cout << "  skipped " << x.p << " (" << x.reason << ")\n";

    const auto &e1 = c.e1();
    auto w = weierstrass_model(e1);
    std::cout << "E1: " << w << ", conductor " << conductor(w) << "\n";
    for (auto p : {3, 5, 7}) {
        auto rep = classify_reduction(w, p);
        std::cout << "  p = " << p << ": " << rep.kodaira.to_string() << ", " << to_string(rep.actual) << "\n";
    }

    auto scan = supersingular_scan(TwoTorsionCurve(1, -1), 100);
    std::cout << "supersingular primes of y^2 = x^3 - x below 100:";
    for (auto p : scan.primes)
        std::cout << " " << p;
    std::cout << "\n";

    auto g = FinAbGroup::from_points(rational_points_mod_p(TwoTorsionCurve(1, -1), 11));
    auto filt = aug_filtration(g, 3);
    std::cout << "E(F_11) has order " << g.order() << "; I^r/I^(r+1) for r = 1..3:";
    for (const auto &q : filt.quotients) {
        std::cout << " [";
        for (std::size_t i = 0; i < q.size(); ++i)
            std::cout << (i ? "," : "") << q[i];
        std::cout << "]";
    }
    std::cout << "\n";
}
