#ifndef DREP_ERRORS_HPP
#define DREP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace drep
{

// Every failure carries a stable machine-readable code ("ZeroDivision",
// "NotFlat", ...) used by the CLI diagnostics.
class error : public std::runtime_error
{
public:
    error(std::string code, const std::string &what) : std::runtime_error(what), m_code(std::move(code)) {}

    const std::string &code() const noexcept
    {
        return m_code;
    }

private:
    std::string m_code;
};

#define DREP_DEFINE_ERROR(name)                                                                                        \
    class name : public error                                                                                          \
    {                                                                                                                  \
    public:                                                                                                            \
        explicit name(const std::string &what) : error(#name, what) {}                                                 \
    };

DREP_DEFINE_ERROR(ZeroDivision)
DREP_DEFINE_ERROR(UndeterminedLeadingTerm)
DREP_DEFINE_ERROR(InsufficientPrecision)
DREP_DEFINE_ERROR(LevelMismatch)
DREP_DEFINE_ERROR(IndexOutOfRange)
DREP_DEFINE_ERROR(UndeterminedPivot)
DREP_DEFINE_ERROR(WindowOverflow)
DREP_DEFINE_ERROR(FieldMismatch)
DREP_DEFINE_ERROR(NotFlat)
DREP_DEFINE_ERROR(NotClosed)
DREP_DEFINE_ERROR(NotIndependent)
DREP_DEFINE_ERROR(SearchExhausted)
DREP_DEFINE_ERROR(Unstabilized)
DREP_DEFINE_ERROR(DegreeMismatch)
DREP_DEFINE_ERROR(SingularWindow)
DREP_DEFINE_ERROR(UnsupportedFrame)
DREP_DEFINE_ERROR(DimensionMismatch)
DREP_DEFINE_ERROR(UnknownKey)

#undef DREP_DEFINE_ERROR

// Parse failures report a 1-based line and column.
class SyntaxError : public error
{
public:
    SyntaxError(const std::string &what, int line, int column)
        : error("SyntaxError", what + " at " + std::to_string(line) + ":" + std::to_string(column)), m_line(line),
          m_column(column)
    {
    }

    int line() const noexcept
    {
        return m_line;
    }
    int column() const noexcept
    {
        return m_column;
    }

private:
    int m_line;
    int m_column;
};

} // namespace drep

#endif
