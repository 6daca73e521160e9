#include "disana/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "disana/errors.hpp"
#include "disana/io.hpp"
#include "disana/text.hpp"

namespace disana::corpus {

using nlohmann::json;

std::optional<PosClass> parse_pos_class(const std::string& s) {
    if (s == "verb") return PosClass::verb;
    if (s == "adj") return PosClass::adj;
    if (s == "noun") return PosClass::noun;
    if (s == "propn") return PosClass::propn;
    if (s == "other") return PosClass::other;
    return std::nullopt;
}

std::string pos_class_name(PosClass c) {
    switch (c) {
        case PosClass::verb: return "verb";
        case PosClass::adj: return "adj";
        case PosClass::noun: return "noun";
        case PosClass::propn: return "propn";
        case PosClass::other: return "other";
    }
    return "noun";
}

LemmaTable LemmaTable::load(const std::string& path) {
    LemmaTable table;
    const auto lines = io::read_lines(path);
    std::size_t lineno = 0;
    for (const auto& line : lines) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw ValidationError("lemma table " + path + " line " + std::to_string(lineno) +
                                  ": expected 3 tab-separated columns");
        }
        const std::string surface = text::to_lower(line.substr(0, tab1));
        const std::string lemma = text::to_lower(line.substr(tab1 + 1, tab2 - tab1 - 1));
        const std::string pos_str = line.substr(tab2 + 1);
        const auto pos = parse_pos_class(pos_str);
        if (surface.empty() || lemma.empty() || !pos) {
            throw ValidationError("lemma table " + path + " line " + std::to_string(lineno) +
                                  ": bad entry '" + line + "'");
        }
        table.insert(surface, lemma, *pos);
    }
    return table;
}

void LemmaTable::insert(const std::string& surface, const std::string& lemma, PosClass pos) {
    entries_.emplace(surface, LemmaEntry{lemma, pos});
}

const LemmaEntry* LemmaTable::find(const std::string& surface_lower) const {
    const auto it = entries_.find(surface_lower);
    return it == entries_.end() ? nullptr : &it->second;
}

namespace {

bool valid_hashtag(const std::string& tag) {
    if (tag.empty()) return false;
    for (char c : tag) {
        if (c == '#' || c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
    }
    return true;
}

} // namespace

std::optional<TweetRecord> parse_record_line(const std::string& line) {
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!doc.is_object()) return std::nullopt;
    if (!doc.contains("id") || !doc.contains("created_at") || !doc.contains("lang") ||
        !doc.contains("text") || !doc.contains("hashtags")) {
        return std::nullopt;
    }
    if (!doc["id"].is_string() || !doc["created_at"].is_string() || !doc["lang"].is_string() ||
        !doc["text"].is_string() || !doc["hashtags"].is_array()) {
        return std::nullopt;
    }
    TweetRecord rec;
    rec.id = doc["id"].get<std::string>();
    if (rec.id.empty()) return std::nullopt;
    const auto ts = parse_timestamp(doc["created_at"].get<std::string>());
    if (!ts) return std::nullopt;
    rec.created_at = *ts;
    rec.lang = doc["lang"].get<std::string>();
    rec.text = doc["text"].get<std::string>();
    for (const auto& tag : doc["hashtags"]) {
        if (!tag.is_string()) return std::nullopt;
        std::string t = tag.get<std::string>();
        if (!t.empty() && t[0] == '#') t.erase(0, 1);
        t = text::to_lower(t);
        if (!valid_hashtag(t)) return std::nullopt;
        rec.hashtags.push_back(std::move(t));
    }
    return rec;
}

std::string format_record_line(const TweetRecord& rec) {
    json doc;
    doc["id"] = rec.id;
    doc["created_at"] = format_timestamp(rec.created_at);
    doc["lang"] = rec.lang;
    doc["text"] = rec.text;
    doc["hashtags"] = rec.hashtags;
    return doc.dump();
}

std::vector<TweetRecord> read_records(const std::string& path) {
    std::vector<TweetRecord> out;
    std::size_t lineno = 0;
    for (const auto& line : io::read_lines(path)) {
        ++lineno;
        if (line.empty()) continue;
        auto rec = parse_record_line(line);
        if (!rec) {
            throw ValidationError("bad record in " + path + " line " + std::to_string(lineno));
        }
        out.push_back(std::move(*rec));
    }
    return out;
}

void write_records(const std::string& path, const std::vector<TweetRecord>& records) {
    std::string buf;
    for (const auto& rec : records) {
        buf += format_record_line(rec);
        buf.push_back('\n');
    }
    io::write_file_atomic(path, buf);
}

LoadResult load_corpus(const std::string& path, const TimeWindow& window,
                       const std::string& lang) {
    if (window.begin > window.end) {
        throw ValidationError("time window begin is after end");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path);

    LoadResult result;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++result.stats.lines_read;
        auto rec = parse_record_line(line);
        if (!rec) {
            ++result.stats.malformed;
            continue;
        }
        if (rec->created_at < window.begin || rec->created_at > window.end) {
            ++result.stats.dropped_time;
            continue;
        }
        if (rec->lang != lang) {
            ++result.stats.dropped_lang;
            continue;
        }
        if (!seen_ids.insert(rec->id).second) {
            ++result.stats.duplicate;
            continue;
        }
        ++result.stats.kept;
        result.records.push_back(std::move(*rec));
    }
    return result;
}

std::vector<Token> tokenize(const std::string& utf8_text) {
    std::vector<Token> tokens;
    std::string run;
    bool hashtag_pending = false;
    bool run_is_hashtag = false;

    const auto flush = [&]() {
        if (!run.empty()) {
            Token t;
            t.surface = run;
            t.lemma = run;
            t.is_hashtag = run_is_hashtag;
            tokens.push_back(std::move(t));
        }
        run.clear();
        run_is_hashtag = false;
    };

    std::size_t pos = 0;
    const std::string_view view(utf8_text);
    while (pos < view.size()) {
        const char32_t cp = text::decode_utf8(view, pos);
        if (text::is_word_codepoint(cp)) {
            if (run.empty() && hashtag_pending) run_is_hashtag = true;
            text::encode_utf8(text::lower_codepoint(cp), run);
            hashtag_pending = false;
        } else {
            flush();
            hashtag_pending = (cp == U'#');
        }
    }
    flush();
    return tokens;
}

Token lemmatize(Token token, const LemmaTable& table) {
    const std::string key = text::to_lower(token.surface);
    if (const auto* entry = table.find(key)) {
        token.lemma = entry->lemma;
    } else {
        token.lemma = key;
    }
    return token;
}

} // namespace disana::corpus
