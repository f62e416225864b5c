#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccnsim {

/// Thrown when a name string does not follow the "/a/b/c" form.
class MalformedNameError : public std::invalid_argument {
public:
  explicit MalformedNameError(const std::string& what)
    : std::invalid_argument(what)
  {
  }
};

/** \brief Hierarchical content identifier, e.g. "/Sea/item042".
 *
 *  Held in canonical text form: "/" followed by non-empty components joined
 *  by "/". Parsing the canonical form round-trips exactly. The
 *  default-constructed value is the empty name, which is not a valid content
 *  name; it only serves as a "no name" placeholder.
 *
 *  Names order by their canonical text. Every deterministic tie-break in the
 *  simulator that falls back to "name order" means this ordering.
 */
class ContentName {
public:
  ContentName() = default;

  /// Parses "/a/b/c"; throws MalformedNameError on bad input.
  static ContentName parse(std::string_view text)
  {
    auto name = tryParse(text);
    if (!name) {
      throw MalformedNameError("malformed name: '" + std::string(text) + "'");
    }
    return *name;
  }

  static std::optional<ContentName> tryParse(std::string_view text)
  {
    // must start with "/", every component non-empty
    if (text.size() < 2 || text.front() != '/' || text.back() == '/') {
      return std::nullopt;
    }
    if (text.find("//") != std::string_view::npos) {
      return std::nullopt;
    }
    ContentName name;
    name.m_text.assign(text);
    return name;
  }

  /// Canonical serialization ("/" + components joined by "/").
  const std::string& str() const { return m_text; }

  bool empty() const { return m_text.empty(); }

  std::size_t componentCount() const
  {
    return static_cast<std::size_t>(std::count(m_text.begin(), m_text.end(), '/'));
  }

  std::vector<std::string_view> components() const
  {
    std::vector<std::string_view> out;
    std::string_view rest{m_text};
    while (!rest.empty()) {
      rest.remove_prefix(1); // leading '/'
      auto slash = rest.find('/');
      out.push_back(rest.substr(0, slash));
      rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
    }
    return out;
  }

  /// True iff this name's components are a leading sublist of `name`'s.
  bool isPrefixOf(const ContentName& name) const
  {
    if (empty() || name.empty()) {
      return false;
    }
    const std::string& full = name.m_text;
    if (full.size() < m_text.size() || full.compare(0, m_text.size(), m_text) != 0) {
      return false;
    }
    return full.size() == m_text.size() || full[m_text.size()] == '/';
  }

  /// Name with the last component dropped; empty when one component remains.
  ContentName parentPrefix() const
  {
    ContentName parent;
    auto pos = m_text.find_last_of('/');
    if (pos != std::string::npos && pos > 0) {
      parent.m_text = m_text.substr(0, pos);
    }
    return parent;
  }

  friend bool operator==(const ContentName&, const ContentName&) = default;

  friend std::strong_ordering operator<=>(const ContentName& a, const ContentName& b)
  {
    return a.m_text.compare(b.m_text) <=> 0;
  }

private:
  std::string m_text;
};

struct ContentNameHash {
  std::size_t operator()(const ContentName& name) const noexcept
  {
    return std::hash<std::string>{}(name.str());
  }
};

inline ContentName parseName(std::string_view text)
{
  return ContentName::parse(text);
}

inline bool isPrefixOf(const ContentName& prefix, const ContentName& name)
{
  return prefix.isPrefixOf(name);
}

} // namespace ccnsim
