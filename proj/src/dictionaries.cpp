#include "gld/dictionaries.hpp"

#include <charconv>

namespace gld {

std::vector<rank_t> single_interval(std::size_t n) {
    require_rank_capacity(n);
    return {0, static_cast<rank_t>(n)};
}

SplayDictionarySet::SplayDictionarySet(std::span<const key_t> sorted, std::vector<rank_t> bounds, DictParams)
    : bounds_(std::move(bounds)), n_(sorted.size()) {
    require_rank_capacity(sorted.size());
    if (bounds_.empty() || bounds_.front() != 0 || bounds_.back() != sorted.size())
        throw std::invalid_argument("interval bounds must start at 0 and end at n");
    pool_.reserve(sorted.size());
    roots_.resize(intervals(), SplayPool::nil);
    for (std::size_t i = 0; i < intervals(); ++i) {
        if (bounds_[i + 1] < bounds_[i]) throw std::invalid_argument("interval bounds must be nondecreasing");
        roots_[i] = pool_.build(sorted.subspan(bounds_[i], bounds_[i + 1] - bounds_[i]));
    }
}

DictSpec DictSpec::parse(std::string_view text) {
    DictSpec spec;
    std::string_view id = text;
    std::string_view arg;
    if (const auto colon = text.find(':'); colon != std::string_view::npos) {
        id = text.substr(0, colon);
        arg = text.substr(colon + 1);
    }
    if (id == "bbs") spec.kind = DictKind::bbs;
    else if (id == "bfs") spec.kind = DictKind::bfs;
    else if (id == "bfe") spec.kind = DictKind::bfe;
    else if (id == "bft") spec.kind = DictKind::bft;
    else if (id == "is") spec.kind = DictKind::is;
    else if (id == "css") spec.kind = DictKind::css;
    else if (id == "splay") spec.kind = DictKind::splay;
    else
        throw std::invalid_argument("unknown dictionary '" + std::string(text) + "'; valid: " +
                                    std::string(kValidDictIds));
    if (!arg.empty()) {
        if (spec.kind != DictKind::bft)
            throw std::invalid_argument("dictionary '" + std::string(id) + "' takes no parameter");
        std::size_t block = 0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), block);
        if (ec != std::errc{} || ptr != arg.data() + arg.size() || block == 0)
            throw std::invalid_argument("bad B-tree page size '" + std::string(arg) + "'");
        spec.params.btree_block = block;
    }
    return spec;
}

std::string DictSpec::name() const {
    switch (kind) {
        case DictKind::bbs: return "bbs";
        case DictKind::bfs: return "bfs";
        case DictKind::bfe: return "bfe";
        case DictKind::bft: return "bft:" + std::to_string(params.btree_block);
        case DictKind::is: return "is";
        case DictKind::css: return "css";
        case DictKind::splay: return "splay";
    }
    return "?";
}

std::vector<DictSpec> parse_dict_list(std::string_view csv) {
    std::vector<DictSpec> out;
    while (!csv.empty()) {
        const auto comma = csv.find(',');
        const std::string_view item = csv.substr(0, comma);
        if (!item.empty()) out.push_back(DictSpec::parse(item));
        if (comma == std::string_view::npos) break;
        csv.remove_prefix(comma + 1);
    }
    if (out.empty()) throw std::invalid_argument("empty dictionary list; valid: " + std::string(kValidDictIds));
    return out;
}

}  // namespace gld
