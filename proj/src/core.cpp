#include "medpower/core.hpp"

#include <stdexcept>

#include "medpower/errors.hpp"

namespace medpower {

const char* to_string(Path p) {
    switch (p) {
        case Path::A: return "a";
        case Path::B: return "b";
        case Path::CPrime: return "c_prime";
        case Path::CTotal: return "c";
        case Path::AB: return "ab";
    }
    return "?";
}

Path path_from_string(std::string_view name) {
    for (Path p : kAllPaths) {
        if (name == to_string(p)) return p;
    }
    throw std::invalid_argument("unknown path name: " + std::string(name));
}

const char* to_string(CiMethod m) {
    switch (m) {
        case CiMethod::PER: return "PER";
        case CiMethod::BC: return "BC";
        case CiMethod::BCA: return "BCA";
    }
    return "?";
}

CiMethod method_from_string(std::string_view name) {
    for (CiMethod m : kAllMethods) {
        if (name == to_string(m)) return m;
    }
    throw std::invalid_argument("unknown CI method: " + std::string(name));
}

MethodSet MethodSet::parse(std::string_view list) {
    MethodSet out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = list.find(',', pos);
        const std::string_view token =
            list.substr(pos, comma == std::string_view::npos ? list.size() - pos : comma - pos);
        if (token.empty()) {
            throw ConfigInvalid("methods list has an empty entry: '" + std::string(list) + "'");
        }
        try {
            out.add(method_from_string(token));
        } catch (const std::invalid_argument& e) {
            throw ConfigInvalid(e.what());
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) {
        throw ConfigInvalid("methods list is empty");
    }
    return out;
}

std::vector<CiMethod> MethodSet::methods() const {
    std::vector<CiMethod> out;
    for (CiMethod m : kAllMethods) {
        if (contains(m)) out.push_back(m);
    }
    return out;
}

std::string MethodSet::str() const {
    std::string out;
    for (CiMethod m : kAllMethods) {
        if (!contains(m)) continue;
        if (!out.empty()) out += ',';
        out += to_string(m);
    }
    return out;
}

void validate(const Scenario& s) {
    if (s.n < 4) throw std::invalid_argument("scenario: n must be at least 4");
    if (s.resamples < 1) throw std::invalid_argument("scenario: resamples must be positive");
    if (s.repeats < 1) throw std::invalid_argument("scenario: repeats must be positive");
    if (!(s.alpha > 0.0 && s.alpha < 1.0)) {
        throw std::invalid_argument("scenario: alpha must lie in (0, 1)");
    }
}

}  // namespace medpower
