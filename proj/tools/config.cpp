#include "config.hpp"

#include <popcent/error.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace popcent::cli {

using nlohmann::json;

namespace {

class TomlReader {
public:
    explicit TomlReader(const std::string &text) : s_(text) {}

    json parse() {
        json root = json::object();
        json *table = &root;
        for (;;) {
            skip_blank_lines();
            if (at_end())
                break;
            if (peek() == '[') {
                ++pos_;
                skip_spaces();
                std::string name = key();
                skip_spaces();
                expect(']');
                if (root.contains(name))
                    fail("table [" + name + "] defined twice");
                root[name] = json::object();
                table = &root[name];
            } else {
                std::string k = key();
                skip_spaces();
                expect('=');
                skip_spaces();
                if (table->contains(k))
                    fail("duplicate key '" + k + "'");
                (*table)[k] = value();
            }
            end_of_line();
        }
        return root;
    }

private:
    const std::string &s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;

    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError("config: " + what, line_);
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    void skip_spaces() {
        while (!at_end() && (peek() == ' ' || peek() == '\t'))
            ++pos_;
    }
    void skip_comment() {
        if (peek() == '#')
            while (!at_end() && peek() != '\n')
                ++pos_;
    }
    void newline() {
        if (peek() == '\r')
            ++pos_;
        if (peek() == '\n') {
            ++pos_;
            ++line_;
        }
    }
    void skip_blank_lines() {
        for (;;) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n' || peek() == '\r')
                newline();
            else
                return;
        }
    }
    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (!at_end() && peek() != '\n' && peek() != '\r')
            fail(std::string("unexpected '") + peek() + "'");
        newline();
    }
    void expect(char c) {
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string key() {
        if (peek() == '"')
            return string();
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                             peek() == '-'))
            ++pos_;
        if (start == pos_)
            fail("expected a key");
        return s_.substr(start, pos_ - start);
    }

    std::string string() {
        expect('"');
        std::string out;
        for (;;) {
            if (at_end() || peek() == '\n')
                fail("unterminated string");
            char c = s_[pos_++];
            if (c == '"')
                return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            char e = s_[pos_++];
            switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            default: fail(std::string("unsupported escape \\") + e);
            }
        }
    }

    void skip_array_space() {
        for (;;) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n' || peek() == '\r')
                newline();
            else
                return;
        }
    }

    json value() {
        char c = peek();
        if (c == '"')
            return string();
        if (c == '[') {
            ++pos_;
            json arr = json::array();
            skip_array_space();
            while (peek() != ']') {
                arr.push_back(value());
                skip_array_space();
                if (peek() == ',') {
                    ++pos_;
                    skip_array_space();
                } else if (peek() != ']') {
                    fail("expected ',' or ']' in array");
                }
            }
            ++pos_;
            return arr;
        }
        std::size_t start = pos_;
        while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' &&
               peek() != ']' && peek() != '#')
            ++pos_;
        std::string tok = s_.substr(start, pos_ - start);
        if (tok == "true")
            return true;
        if (tok == "false")
            return false;
        std::string digits;
        for (char d : tok)
            if (d != '_')
                digits += d;
        if (digits.empty())
            fail("expected a value");
        const char *b = digits.data() + (digits[0] == '+' ? 1 : 0);
        const char *e = digits.data() + digits.size();
        if (digits.find_first_of(".eE") == std::string::npos) {
            std::int64_t i = 0;
            auto [p, ec] = std::from_chars(b, e, i);
            if (ec == std::errc{} && p == e) {
                if (i >= 0)
                    return static_cast<std::uint64_t>(i);
                return i;
            }
            std::uint64_t u = 0;
            auto [p2, ec2] = std::from_chars(b, e, u);
            if (ec2 == std::errc{} && p2 == e)
                return u;
        } else {
            double d = 0.0;
            auto [p, ec] = std::from_chars(b, e, d);
            if (ec == std::errc{} && p == e)
                return d;
        }
        fail("unrecognized value '" + tok + "'");
    }
};

} // namespace

json parse_toml(const std::string &text) { return TomlReader(text).parse(); }

json load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (path.extension() == ".json") {
        try {
            auto j = json::parse(buf.str());
            if (!j.is_object())
                throw ParseError("config: top level must be an object");
            return j;
        } catch (const json::parse_error &e) {
            throw ParseError(std::string("config: ") + e.what());
        }
    }
    return parse_toml(buf.str());
}

} // namespace popcent::cli
