#include "cannings/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

#include "cannings/errors.hpp"

namespace cannings {

namespace {

struct Token {
    enum class Kind { Punct, Atom, String, End };
    Kind kind = Kind::End;
    char punct = 0;
    std::string text;
    int line = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError("config line " + std::to_string(tok_.line) + ": " + msg);
    }

  private:
    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        tok_ = Token{};
        tok_.line = line_;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = text_[pos_];
        if (c == '[' || c == ']' || c == '{' || c == '}' || c == ',' || c == '=' || c == '.') {
            tok_.kind = Token::Kind::Punct;
            tok_.punct = c;
            ++pos_;
            return;
        }
        if (c == '"') {
            ++pos_;
            std::string out;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                char d = text_[pos_];
                if (d == '\\' && pos_ + 1 < text_.size()) {
                    char e = text_[pos_ + 1];
                    if (e == 'n') out += '\n';
                    else if (e == 't') out += '\t';
                    else out += e;
                    pos_ += 2;
                } else {
                    if (d == '\n')
                        throw ValidationError("config line " + std::to_string(line_) +
                                              ": unterminated string");
                    out += d;
                    ++pos_;
                }
            }
            if (pos_ >= text_.size())
                throw ValidationError("config line " + std::to_string(line_) + ": unterminated string");
            ++pos_;
            tok_.kind = Token::Kind::String;
            tok_.text = out;
            return;
        }
        // bare atom: key, number, or boolean (dots break atoms so dotted keys work)
        std::string out;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '-' || d == '+' ||
                d == 'e' || d == 'E') {
                out += d;
                ++pos_;
            } else if (d == '.') {
                // keep the dot inside numbers, break on key separators
                bool numeric = !out.empty() && (std::isdigit(static_cast<unsigned char>(out[0])) ||
                                                out[0] == '-' || out[0] == '+');
                if (!numeric) break;
                out += d;
                ++pos_;
            } else {
                break;
            }
        }
        if (out.empty())
            throw ValidationError("config line " + std::to_string(line_) + ": unexpected character '" +
                                  std::string(1, c) + "'");
        tok_.kind = Token::Kind::Atom;
        tok_.text = out;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    Token tok_;
};

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) {
        root_.type = TomlValue::Type::Table;
    }

    TomlValue parse() {
        TomlValue* current = &root_;
        while (lex_.peek().kind != Token::Kind::End) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Punct && t.punct == '[') {
                current = parse_header();
            } else if (t.kind == Token::Kind::Atom || t.kind == Token::Kind::String) {
                parse_keyval(current);
            } else {
                lex_.fail("expected a key or a [section] header");
            }
        }
        return std::move(root_);
    }

  private:
    std::vector<std::string> parse_keypath() {
        std::vector<std::string> path;
        while (true) {
            Token t = lex_.take();
            if (t.kind != Token::Kind::Atom && t.kind != Token::Kind::String)
                lex_.fail("expected a key");
            path.push_back(t.text);
            if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().punct == '.') {
                lex_.take();
                continue;
            }
            break;
        }
        return path;
    }

    TomlValue* descend(TomlValue* node, const std::vector<std::string>& path, size_t upto, int line) {
        for (size_t idx = 0; idx < upto; ++idx) {
            TomlValue& child = node->table[path[idx]];
            if (child.type == TomlValue::Type::None) {
                child.type = TomlValue::Type::Table;
                child.line = line;
            }
            if (child.type == TomlValue::Type::Array) {
                if (child.array.empty() || !child.array.back().is_table())
                    throw ValidationError("config line " + std::to_string(line) + ": '" + path[idx] +
                                          "' is not a table");
                node = &child.array.back();
            } else if (child.is_table()) {
                node = &child;
            } else {
                throw ValidationError("config line " + std::to_string(line) + ": '" + path[idx] +
                                      "' is not a table");
            }
        }
        return node;
    }

    TomlValue* parse_header() {
        Token open = lex_.take();  // '['
        bool is_array = lex_.peek().kind == Token::Kind::Punct && lex_.peek().punct == '[';
        if (is_array) lex_.take();
        std::vector<std::string> path = parse_keypath();
        auto expect_close = [&]() {
            Token t = lex_.take();
            if (t.kind != Token::Kind::Punct || t.punct != ']') lex_.fail("expected ']'");
        };
        expect_close();
        if (is_array) expect_close();

        TomlValue* node = descend(&root_, path, path.size() - 1, open.line);
        TomlValue& leaf = node->table[path.back()];
        if (is_array) {
            if (leaf.type == TomlValue::Type::None) {
                leaf.type = TomlValue::Type::Array;
                leaf.line = open.line;
            }
            if (!leaf.is_array())
                throw ValidationError("config line " + std::to_string(open.line) + ": '" + path.back() +
                                      "' is not an array of tables");
            TomlValue elem;
            elem.type = TomlValue::Type::Table;
            elem.line = open.line;
            leaf.array.push_back(std::move(elem));
            return &leaf.array.back();
        }
        if (leaf.type == TomlValue::Type::None) {
            leaf.type = TomlValue::Type::Table;
            leaf.line = open.line;
        }
        if (!leaf.is_table())
            throw ValidationError("config line " + std::to_string(open.line) + ": '" + path.back() +
                                  "' is already defined with another type");
        return &leaf;
    }

    void parse_keyval(TomlValue* current) {
        int line = lex_.peek().line;
        std::vector<std::string> path = parse_keypath();
        Token eq = lex_.take();
        if (eq.kind != Token::Kind::Punct || eq.punct != '=') lex_.fail("expected '=' after key");
        TomlValue* node = descend(current, path, path.size() - 1, line);
        TomlValue& slot = node->table[path.back()];
        if (slot.type != TomlValue::Type::None)
            throw ValidationError("config line " + std::to_string(line) + ": duplicate key '" +
                                  path.back() + "'");
        slot = parse_value();
        slot.line = line;
    }

    TomlValue parse_value() {
        const Token& t = lex_.peek();
        TomlValue v;
        v.line = t.line;
        if (t.kind == Token::Kind::String) {
            v.type = TomlValue::Type::String;
            v.s = lex_.take().text;
            return v;
        }
        if (t.kind == Token::Kind::Punct && t.punct == '[') {
            lex_.take();
            v.type = TomlValue::Type::Array;
            while (!(lex_.peek().kind == Token::Kind::Punct && lex_.peek().punct == ']')) {
                v.array.push_back(parse_value());
                if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().punct == ',') {
                    lex_.take();
                } else {
                    break;
                }
            }
            Token close = lex_.take();
            if (close.kind != Token::Kind::Punct || close.punct != ']') lex_.fail("expected ']'");
            return v;
        }
        if (t.kind == Token::Kind::Punct && t.punct == '{') {
            lex_.take();
            v.type = TomlValue::Type::Table;
            while (!(lex_.peek().kind == Token::Kind::Punct && lex_.peek().punct == '}')) {
                Token key = lex_.take();
                if (key.kind != Token::Kind::Atom && key.kind != Token::Kind::String)
                    lex_.fail("expected a key in the inline table");
                Token eq = lex_.take();
                if (eq.kind != Token::Kind::Punct || eq.punct != '=') lex_.fail("expected '='");
                v.table[key.text] = parse_value();
                if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().punct == ',') lex_.take();
            }
            lex_.take();  // '}'
            return v;
        }
        if (t.kind == Token::Kind::Atom) {
            Token atom = lex_.take();
            const std::string& s = atom.text;
            if (s == "true" || s == "false") {
                v.type = TomlValue::Type::Bool;
                v.b = (s == "true");
                return v;
            }
            bool has_dot = s.find('.') != std::string::npos;
            bool has_exp = s.find('e') != std::string::npos || s.find('E') != std::string::npos;
            char* end = nullptr;
            if (!has_dot && !has_exp) {
                long long iv = std::strtoll(s.c_str(), &end, 10);
                if (end == s.c_str() + s.size()) {
                    v.type = TomlValue::Type::Int;
                    v.i = iv;
                    return v;
                }
            }
            double fv = std::strtod(s.c_str(), &end);
            if (end == s.c_str() + s.size()) {
                v.type = TomlValue::Type::Float;
                v.f = fv;
                return v;
            }
            throw ValidationError("config line " + std::to_string(atom.line) + ": '" + s +
                                  "' is not a valid value (strings need quotes)");
        }
        lex_.fail("expected a value");
    }

    Lexer lex_;
    TomlValue root_;
};

}  // namespace

TomlValue parse_toml(const std::string& text) { return Parser(text).parse(); }

}  // namespace cannings
