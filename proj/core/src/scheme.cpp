#include "mut/scheme.hpp"

#include <bit>
#include <sstream>

#include "mut/embed.hpp"
#include "mut/error.hpp"

namespace mut {

std::size_t label_width(const UniversalSpec& spec) {
    const std::uint64_t size = universal_size(spec);
    if (size <= 2) return 1;
    return std::bit_width(size - 1);
}

SchemeInstance::SchemeInstance(const UniversalSpec& spec)
    : universal_(std::make_shared<const UniversalTree>(build_universal(spec))),
      width_(label_width(spec)) {}

BitString SchemeInstance::label_of(std::uint64_t index) const {
    return BitString::from_uint(index, width_);
}

std::uint64_t SchemeInstance::index_of(const BitString& label) const {
    if (label.size() != width_) {
        throw DecodeError("label has " + std::to_string(label.size()) + " bits, expected " +
                          std::to_string(width_));
    }
    const auto idx = label.to_uint();
    if (idx >= universal_->size()) throw DecodeError("label index beyond universal tree");
    return idx;
}

std::vector<BitString> SchemeInstance::encode(const RootedTree& t) const {
    const auto e = embed(t, spec());
    std::vector<BitString> out;
    out.reserve(t.size());
    for (auto x : e.map) out.push_back(label_of(x));
    return out;
}

BitString SchemeInstance::decode_nca(const BitString& a, const BitString& b) const {
    return label_of(universal_nca(*universal_, index_of(a), index_of(b)));
}

std::string write_label_file(const std::vector<BitString>& labels) {
    std::ostringstream os;
    for (std::size_t i = 0; i < labels.size(); ++i) os << i << ": " << labels[i].to_string() << '\n';
    return os.str();
}

std::map<std::size_t, BitString> parse_label_file(std::string_view text) {
    std::map<std::size_t, BitString> out;
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t offset = 0;
    while (std::getline(is, line)) {
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("label file: missing ':'", line_start);
        std::size_t idx = 0;
        try {
            idx = std::stoul(line.substr(0, colon));
        } catch (const std::exception&) {
            throw ParseError("label file: bad node index", line_start);
        }
        auto bits = line.substr(colon + 1);
        const auto b = bits.find_first_not_of(" \t");
        const auto e = bits.find_last_not_of(" \t\r");
        bits = b == std::string::npos ? "" : bits.substr(b, e - b + 1);
        out[idx] = BitString::from_string(bits);
    }
    return out;
}

}  // namespace mut
