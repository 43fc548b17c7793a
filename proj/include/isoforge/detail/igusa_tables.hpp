// Generated by tools/gen_igusa_tables.py. Do not edit.
#pragma once

#include <array>
#include <cstdint>

namespace isoforge::detail {

struct IgusaTerm {
    std::int64_t coeff;
    std::array<std::uint8_t, 7> exps;  // powers of c0..c6
};

inline constexpr std::array<IgusaTerm, 4> kIgusaI2{{
    {6, {0, 0, 0, 2, 0, 0, 0}},
    {-16, {0, 0, 1, 0, 1, 0, 0}},
    {40, {0, 1, 0, 0, 0, 1, 0}},
    {-240, {1, 0, 0, 0, 0, 0, 1}},
}};

inline constexpr std::array<IgusaTerm, 16> kIgusaI4{{
    {4, {0, 0, 2, 0, 2, 0, 0}},
    {-12, {0, 0, 2, 1, 0, 1, 0}},
    {48, {0, 0, 3, 0, 0, 0, 1}},
    {-12, {0, 1, 0, 1, 2, 0, 0}},
    {36, {0, 1, 0, 2, 0, 1, 0}},
    {4, {0, 1, 1, 0, 1, 1, 0}},
    {-180, {0, 1, 1, 1, 0, 0, 1}},
    {-80, {0, 2, 0, 0, 0, 2, 0}},
    {300, {0, 2, 0, 0, 1, 0, 1}},
    {48, {1, 0, 0, 0, 3, 0, 0}},
    {-180, {1, 0, 0, 1, 1, 1, 0}},
    {324, {1, 0, 0, 2, 0, 0, 1}},
    {300, {1, 0, 1, 0, 0, 2, 0}},
    {-504, {1, 0, 1, 0, 1, 0, 1}},
    {-540, {1, 1, 0, 0, 0, 1, 1}},
    {1620, {2, 0, 0, 0, 0, 0, 2}},
}};

inline constexpr std::array<IgusaTerm, 56> kIgusaI6{{
    {8, {0, 0, 2, 2, 2, 0, 0}},
    {-24, {0, 0, 2, 3, 0, 1, 0}},
    {-24, {0, 0, 3, 0, 3, 0, 0}},
    {76, {0, 0, 3, 1, 1, 1, 0}},
    {60, {0, 0, 3, 2, 0, 0, 1}},
    {-36, {0, 0, 4, 0, 0, 2, 0}},
    {-160, {0, 0, 4, 0, 1, 0, 1}},
    {-24, {0, 1, 0, 3, 2, 0, 0}},
    {72, {0, 1, 0, 4, 0, 1, 0}},
    {76, {0, 1, 1, 1, 3, 0, 0}},
    {-238, {0, 1, 1, 2, 1, 1, 0}},
    {-198, {0, 1, 1, 3, 0, 0, 1}},
    {28, {0, 1, 2, 0, 2, 1, 0}},
    {26, {0, 1, 2, 1, 0, 2, 0}},
    {492, {0, 1, 2, 1, 1, 0, 1}},
    {616, {0, 1, 3, 0, 0, 1, 1}},
    {-36, {0, 2, 0, 0, 4, 0, 0}},
    {26, {0, 2, 0, 1, 2, 1, 0}},
    {176, {0, 2, 0, 2, 0, 2, 0}},
    {330, {0, 2, 0, 2, 1, 0, 1}},
    {64, {0, 2, 1, 0, 1, 2, 0}},
    {-640, {0, 2, 1, 0, 2, 0, 1}},
    {-1860, {0, 2, 1, 1, 0, 1, 1}},
    {-900, {0, 2, 2, 0, 0, 0, 2}},
    {-320, {0, 3, 0, 0, 0, 3, 0}},
    {1600, {0, 3, 0, 0, 1, 1, 1}},
    {2250, {0, 3, 0, 1, 0, 0, 2}},
    {60, {1, 0, 0, 2, 3, 0, 0}},
    {-198, {1, 0, 0, 3, 1, 1, 0}},
    {162, {1, 0, 0, 4, 0, 0, 1}},
    {-160, {1, 0, 1, 0, 4, 0, 0}},
    {492, {1, 0, 1, 1, 2, 1, 0}},
    {330, {1, 0, 1, 2, 0, 2, 0}},
    {-468, {1, 0, 1, 2, 1, 0, 1}},
    {-640, {1, 0, 2, 0, 1, 2, 0}},
    {424, {1, 0, 2, 0, 2, 0, 1}},
    {-876, {1, 0, 2, 1, 0, 1, 1}},
    {-96, {1, 0, 3, 0, 0, 0, 2}},
    {616, {1, 1, 0, 0, 3, 1, 0}},
    {-1860, {1, 1, 0, 1, 1, 2, 0}},
    {-876, {1, 1, 0, 1, 2, 0, 1}},
    {1818, {1, 1, 0, 2, 0, 1, 1}},
    {1600, {1, 1, 1, 0, 0, 3, 0}},
    {3472, {1, 1, 1, 0, 1, 1, 1}},
    {3060, {1, 1, 1, 1, 0, 0, 2}},
    {-2240, {1, 2, 0, 0, 0, 2, 1}},
    {-18600, {1, 2, 0, 0, 1, 0, 2}},
    {-900, {2, 0, 0, 0, 2, 2, 0}},
    {-96, {2, 0, 0, 0, 3, 0, 1}},
    {2250, {2, 0, 0, 1, 0, 3, 0}},
    {3060, {2, 0, 0, 1, 1, 1, 1}},
    {-10044, {2, 0, 0, 2, 0, 0, 2}},
    {-18600, {2, 0, 1, 0, 0, 2, 1}},
    {20664, {2, 0, 1, 0, 1, 0, 2}},
    {59940, {2, 1, 0, 0, 0, 1, 2}},
    {-119880, {3, 0, 0, 0, 0, 0, 3}},
}};

}  // namespace isoforge::detail
