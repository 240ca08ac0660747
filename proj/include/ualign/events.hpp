#ifndef UALIGN_EVENTS_HPP
#define UALIGN_EVENTS_HPP

#include <stdexcept>
#include <string>

namespace ualign {

/** Numerical events terminate a run; the kind is echoed into the event log. */
class NumericalEvent : public std::runtime_error {
  public:
    enum class Kind { Blowup, Vacuum, Quadrature, MocBreakthrough };
    NumericalEvent(Kind kind, double t, const std::string& detail)
        : std::runtime_error(detail), kind_(kind), t_(t) {}
    Kind kind() const { return kind_; }
    double t() const { return t_; }
    static const char* name(Kind k) {
        switch (k) {
            case Kind::Blowup: return "blowup";
            case Kind::Vacuum: return "vacuum";
            case Kind::Quadrature: return "quadrature";
            case Kind::MocBreakthrough: return "moc_breakthrough";
        }
        return "unknown";
    }

  private:
    Kind kind_;
    double t_;
};

} // namespace ualign

#endif
