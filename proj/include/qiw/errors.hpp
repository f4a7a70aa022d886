#pragma once

#include <stdexcept>
#include <string>

namespace qiw {

// Violated precondition. `hypothesis` names the violated assumption
// (e.g. "ell odd", "ell split in K") so callers can report it verbatim.
class invalid_input : public std::invalid_argument
{
    std::string hyp;

  public:
    invalid_input(std::string hypothesis, std::string const& what)
        : std::invalid_argument(what), hyp(std::move(hypothesis))
    {
    }
    explicit invalid_input(std::string const& what) : invalid_input("", what) {}
    std::string const& hypothesis() const { return hyp; }
};

// A configured desk-scale bound was exceeded.
class resource_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class precision_error : public std::runtime_error
{
    long needed;

  public:
    precision_error(long required, std::string const& what) : std::runtime_error(what), needed(required) {}
    long required_precision() const { return needed; }
};

// Two computation routes that must agree did not.
class consistency_error : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

} // namespace qiw
