#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace usea {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// A point in the decision space; length equals the problem dimension.
using DecisionVector = VectorX<double>;

// Raised when the objective returns a non-finite value.
class EvaluationFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x)
{
    return x.derived().array().isFinite().all();
}

// Axis-aligned box [lower, upper].
class Bounds {
public:
    Bounds(DecisionVector lower, DecisionVector upper);
    static Bounds uniform(Eigen::Index n, double lo, double hi);

    Eigen::Index dim() const { return lower_.size(); }
    const DecisionVector& lower() const { return lower_; }
    const DecisionVector& upper() const { return upper_; }
    DecisionVector width() const { return upper_ - lower_; }

    template <typename Derived>
    bool contains(const Eigen::MatrixBase<Derived>& x) const
    {
        return x.size() == dim() && (x.array() >= lower_.array()).all() &&
               (x.array() <= upper_.array()).all();
    }

    template <typename Derived>
    DecisionVector clamp(const Eigen::MatrixBase<Derived>& x) const
    {
        return x.cwiseMax(lower_).cwiseMin(upper_);
    }

    bool operator==(const Bounds&) const = default;

private:
    DecisionVector lower_;
    DecisionVector upper_;
};

struct Evaluated {
    double value;
    bool operator==(const Evaluated&) const = default;
};

struct Predicted {
    double value;
    bool operator==(const Predicted&) const = default;
};

using Fitness = std::variant<std::monostate, Evaluated, Predicted>;

class Individual {
public:
    Individual() = default;
    explicit Individual(DecisionVector x, Fitness fitness = {});

    const DecisionVector& x() const { return x_; }
    const Fitness& fitness() const { return fitness_; }

    bool is_evaluated() const { return std::holds_alternative<Evaluated>(fitness_); }
    bool is_predicted() const { return std::holds_alternative<Predicted>(fitness_); }
    bool has_fitness() const { return !std::holds_alternative<std::monostate>(fitness_); }

    // Evaluated or predicted value; throws when no fitness is attached.
    double value() const;

    // An evaluated fitness can never be replaced.
    void set_fitness(Fitness f);

    bool operator==(const Individual& other) const
    {
        return x_.size() == other.x_.size() && x_ == other.x_ && fitness_ == other.fitness_;
    }

private:
    DecisionVector x_;
    Fitness fitness_;
};

enum class Role { Evaluated, Unevaluated, Offspring };

// Ordered members with a role tag. Evaluated populations only hold
// evaluated members; unevaluated populations only hold predicted ones.
class Population {
public:
    explicit Population(Role role = Role::Offspring) : role_(role) {}
    Population(Role role, std::vector<Individual> members);

    Role role() const { return role_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    const Individual& operator[](std::size_t i) const { return members_[i]; }
    const std::vector<Individual>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    void push_back(Individual ind);
    void reserve(std::size_t n) { members_.reserve(n); }

    // Row-per-member matrix of decision vectors.
    Eigen::MatrixXd as_matrix() const;

    bool operator==(const Population&) const = default;

private:
    void check(const Individual& ind) const;

    Role role_;
    std::vector<Individual> members_;
};

struct ArchiveRecord {
    DecisionVector x;
    double y;
};

// Append-only log of truly evaluated points; fes() == number of records.
class Archive {
public:
    explicit Archive(Bounds bounds) : bounds_(std::move(bounds)) {}

    const Bounds& bounds() const { return bounds_; }
    const std::vector<ArchiveRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::size_t fes() const { return records_.size(); }

    double best_value() const;
    const ArchiveRecord& best() const;

private:
    friend Archive archive_insert(Archive archive, DecisionVector x, double y);

    Bounds bounds_;
    std::vector<ArchiveRecord> records_;
};

// Returns the archive with (x, y) appended. Pass by value and move in to
// avoid copying the existing records.
Archive archive_insert(Archive archive, DecisionVector x, double y);

// Indices of the n smallest values, ascending; ties keep input order.
std::vector<std::size_t> best_indices(const std::vector<double>& values, std::size_t n);

// The N best archive records as an evaluated population, ascending by value.
Population population_update(const Archive& archive, std::size_t n);

} // namespace usea
