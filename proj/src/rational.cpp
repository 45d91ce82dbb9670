#include "fairload/rational.hpp"

namespace fairload {

Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(BigInt(s));
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("bad rational literal '" + s + "': " + e.what());
    }
}

std::string format_rational(const Rat& r) {
    std::string out = numerator(r).str();
    if (denominator(r) != 1) {
        out += "/";
        out += denominator(r).str();
    }
    return out;
}

}  // namespace fairload
