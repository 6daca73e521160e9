#ifndef DISANA_CORPUS_HPP
#define DISANA_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "disana/date.hpp"

namespace disana::corpus {

struct TweetRecord {
    std::string id;
    std::int64_t created_at = 0; // seconds since epoch, UTC
    std::string lang;
    std::string text;
    std::vector<std::string> hashtags; // lowercase, no leading '#'
};

struct Token {
    std::string surface; // lowercase, no internal whitespace
    std::string lemma;   // surface when no table entry
    bool is_hashtag = false;

    bool operator==(const Token&) const = default;
};

/// Exact partition of the input lines: kept + dropped_time + dropped_lang +
/// duplicate + malformed == lines_read.
struct LoadStats {
    std::size_t lines_read = 0;
    std::size_t kept = 0;
    std::size_t dropped_time = 0;
    std::size_t dropped_lang = 0;
    std::size_t duplicate = 0;
    std::size_t malformed = 0;
};

struct TimeWindow {
    std::int64_t begin = 0;
    std::int64_t end = 0; // inclusive
};

struct LoadResult {
    std::vector<TweetRecord> records;
    LoadStats stats;
};

/// POS classes the lemma table may assign; unknown surfaces default to noun
/// so they stay eligible as expansion candidates.
enum class PosClass { verb, adj, noun, propn, other };

std::optional<PosClass> parse_pos_class(const std::string& s);
std::string pos_class_name(PosClass c);

struct LemmaEntry {
    std::string lemma;
    PosClass pos = PosClass::noun;
};

class LemmaTable {
public:
    /// TSV columns: surface, lemma, pos-class. Lookup is case-insensitive
    /// (keys are folded on load).
    static LemmaTable load(const std::string& path);

    void insert(const std::string& surface, const std::string& lemma, PosClass pos);
    const LemmaEntry* find(const std::string& surface_lower) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, LemmaEntry> entries_;
};

/// Parses one line-delimited record; nullopt when the line is malformed.
std::optional<TweetRecord> parse_record_line(const std::string& line);
std::string format_record_line(const TweetRecord& rec);

/// Reads records that are already known-good (stage caches); any malformed
/// line throws.
std::vector<TweetRecord> read_records(const std::string& path);
void write_records(const std::string& path, const std::vector<TweetRecord>& records);

/// Loads, validates and filters the raw corpus. Records outside the window
/// or with a different language tag are dropped and counted; malformed lines
/// are counted and skipped; duplicate ids keep the first occurrence.
LoadResult load_corpus(const std::string& path, const TimeWindow& window,
                       const std::string& lang);

/// Case-folded maximal runs of letters/digits; '#'-prefixed runs become
/// hashtag tokens with the '#' stripped. lemma starts out equal to surface.
std::vector<Token> tokenize(const std::string& utf8_text);

Token lemmatize(Token token, const LemmaTable& table);

} // namespace disana::corpus

#endif
