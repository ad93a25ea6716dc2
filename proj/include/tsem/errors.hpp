#ifndef TSEM_ERRORS_HPP
#define TSEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsem {

/// Input failed schema or precondition validation (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A height value left the admissible band, or an operation was asked to
/// work outside its stated parameter domain (CLI exit code 3).
class AdmissibilityError : public std::runtime_error {
public:
    explicit AdmissibilityError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative method (Newton, CG, BiCGSTAB, Picard) failed to converge.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Mesh generation or mesh validation failure.
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// File format / serialization failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A macroscopic or per-cell height left the admissible band during a run.
/// Carries enough context for the structured abort report.
class HeightBandError : public AdmissibilityError {
public:
    HeightBandError(const std::string& what, int entity, double time, double height)
        : AdmissibilityError(what), entity(entity), time(time), height(height) {}
    int entity;     // offending node (macro) or cell index (micro)
    double time;
    double height;
};

} // namespace tsem

#endif
