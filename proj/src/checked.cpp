#include "collatz/checked.hpp"

#include <algorithm>

namespace collatz {

std::string to_string(u128 v)
{
    if (v == 0) return "0";
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

u128 parse_u128(std::string_view text)
{
    if (text.empty()) throw std::invalid_argument("empty integer");
    u128 v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument("not an unsigned integer: " + std::string(text));
        v = checked_add(checked_mul(v, 10, "parse"), static_cast<u128>(c - '0'), "parse");
    }
    return v;
}

} // namespace collatz
