#include "amencert/cylinder.hpp"

namespace amencert {

int letter_rank(std::int8_t l) {
    if (l == 0) throw SpecError("letter 0 is invalid");
    return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1;
}

std::int8_t letter_from_rank(int r) {
    int i = r / 2 + 1;
    return static_cast<std::int8_t>(r % 2 == 0 ? i : -i);
}

std::string letters_to_string(const std::vector<std::int8_t>& w) {
    if (w.empty()) return "e";
    std::string out;
    for (auto l : w) out += static_cast<char>(l > 0 ? 'a' + (l - 1) : 'A' + (-l - 1));
    return out;
}

std::vector<std::int8_t> letters_from_string(const std::string& text, int rank) {
    if (text == "e" || text == "1" || text.empty()) return {};
    std::vector<std::int8_t> w;
    for (char c : text) {
        int l;
        if (c >= 'a' && c < 'a' + rank)
            l = c - 'a' + 1;
        else if (c >= 'A' && c < 'A' + rank)
            l = -(c - 'A' + 1);
        else
            throw SpecError(std::string("bad letter '") + c + "' in word: " + text);
        if (!w.empty() && w.back() == -l) throw SpecError("word is not reduced: " + text);
        w.push_back(static_cast<std::int8_t>(l));
    }
    return w;
}

std::int8_t canonical_next_letter(std::int8_t prev) {
    for (int r = 0;; ++r) {
        std::int8_t l = letter_from_rank(r);
        if (prev == 0 || l != static_cast<std::int8_t>(-prev)) return l;
    }
}

std::vector<std::int8_t> normalize_cylinder_cell(std::vector<std::int8_t> w) {
    while (!w.empty()) {
        std::int8_t prev = w.size() >= 2 ? w[w.size() - 2] : static_cast<std::int8_t>(0);
        if (w.back() == canonical_next_letter(prev))
            w.pop_back();
        else
            break;
    }
    return w;
}

}  // namespace amencert
