#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace enkit::core {

using ComponentId = std::string;
using IdList = std::vector<ComponentId>;

// Minutes since simulation epoch. All clocks tick in whole minutes.
using TimeMin = std::int64_t;

struct Position {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Position& a, const Position& b) {
        return a.x == b.x && a.y == b.y;
    }
};

enum class ValueKind { Number, Boolean, Time, Position, Identifier, IdList };

const char* to_string(ValueKind k);

struct ValueError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tagged attribute value. Time is kept distinct from Number so schema
// validation can catch unit mistakes.
class Value {
public:
    Value() : data_(0.0) {}

    static Value number(double v) { return Value(Data(std::in_place_index<0>, v)); }
    static Value boolean(bool v) { return Value(Data(std::in_place_index<1>, v)); }
    static Value time(TimeMin v) { return Value(Data(std::in_place_index<2>, v)); }
    static Value position(Position v) { return Value(Data(std::in_place_index<3>, v)); }
    static Value identifier(ComponentId v) { return Value(Data(std::in_place_index<4>, std::move(v))); }
    static Value id_list(IdList v) { return Value(Data(std::in_place_index<5>, std::move(v))); }

    ValueKind kind() const { return static_cast<ValueKind>(data_.index()); }

private:
    using Data = std::variant<double, bool, TimeMin, Position, ComponentId, IdList>;

    template <std::size_t I>
    const std::variant_alternative_t<I, Data>& get(ValueKind want) const {
        if (data_.index() != I)
            throw ValueError(std::string("value kind mismatch: have ") + to_string(kind()) +
                             ", want " + to_string(want));
        return std::get<I>(data_);
    }

public:
    double as_number() const { return get<0>(ValueKind::Number); }
    bool as_bool() const { return get<1>(ValueKind::Boolean); }
    TimeMin as_time() const { return get<2>(ValueKind::Time); }
    const Position& as_position() const { return get<3>(ValueKind::Position); }
    const ComponentId& as_identifier() const { return get<4>(ValueKind::Identifier); }
    const IdList& as_id_list() const { return get<5>(ValueKind::IdList); }

    friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }

private:
    explicit Value(Data d) : data_(std::move(d)) {}

    Data data_;
};

}  // namespace enkit::core
