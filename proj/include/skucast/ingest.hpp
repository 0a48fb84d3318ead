#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "skucast/csv.hpp"
#include "skucast/errors.hpp"
#include "skucast/hierarchy.hpp"

namespace skucast {

/// Wide-format sales file: id columns item_id, dept_id, cat_id, store_id,
/// state_id, then consecutive day columns d_1..d_T of integer counts.
/// Parsing is strict; any malformed row fails with its line number.
inline std::vector<SalesSeries> load_sales_csv(std::istream& in, const std::string& source_name) {
    CsvReader reader(in, source_name);
    std::vector<std::string> fields;
    if (!reader.next(fields)) reader.fail("empty sales file");

    static const std::vector<std::string> id_cols = {"item_id", "dept_id", "cat_id", "store_id",
                                                     "state_id"};
    if (fields.size() < id_cols.size() + 1)
        reader.fail("sales header must contain the id columns and at least one day column");
    for (std::size_t i = 0; i < id_cols.size(); ++i)
        if (fields[i] != id_cols[i])
            reader.fail("expected header column '" + id_cols[i] + "', got '" + fields[i] + "'");
    for (std::size_t i = id_cols.size(); i < fields.size(); ++i) {
        const std::string expected = "d_" + std::to_string(i - id_cols.size() + 1);
        if (fields[i] != expected)
            reader.fail("expected day column '" + expected + "' (days must be consecutive), got '" +
                        fields[i] + "'");
    }
    const std::size_t width = fields.size();
    const std::size_t num_days = width - id_cols.size();

    std::vector<SalesSeries> out;
    while (reader.next(fields)) {
        if (fields.size() != width)
            reader.fail("expected " + std::to_string(width) + " fields, got " +
                        std::to_string(fields.size()));
        SalesSeries s;
        s.item = fields[0];
        s.dept = fields[1];
        s.cat = fields[2];
        s.store = fields[3];
        s.state = fields[4];
        s.values.resize(num_days);
        for (std::size_t d = 0; d < num_days; ++d) {
            const long long v = parse_int(reader, fields[id_cols.size() + d], "sale count");
            if (v < 0) reader.fail("sale counts must be non-negative");
            s.values[d] = v;
        }
        out.push_back(std::move(s));
    }
    if (out.empty()) reader.fail("sales file has no data rows");
    return out;
}

inline std::vector<SalesSeries> load_sales_csv_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return load_sales_csv(in, path);
}

/// Weekly prices keyed by (store, item); weeks are 1-based, week w covering
/// calendar days 7(w-1)+1 .. 7w.
class PriceTable {
public:
    void add(const std::string& store, const std::string& item, long long week, double price) {
        prices_[key(store, item)][week] = price;
    }

    /// Price in effect for the given week; falls back to the most recent
    /// earlier week, then 1.0 when the pair has no price at all.
    double price(const std::string& store, const std::string& item, long long week) const {
        auto it = prices_.find(key(store, item));
        if (it == prices_.end() || it->second.empty()) return 1.0;
        auto wk = it->second.upper_bound(week);
        if (wk == it->second.begin()) return wk->second;
        return std::prev(wk)->second;
    }

    bool empty() const { return prices_.empty(); }

    static PriceTable from_csv(std::istream& in, const std::string& source_name) {
        CsvReader reader(in, source_name);
        std::vector<std::string> fields;
        if (!reader.next(fields)) reader.fail("empty prices file");
        if (fields.size() != 4 || fields[0] != "store_id" || fields[1] != "item_id" ||
            fields[2] != "week" || fields[3] != "price")
            reader.fail("prices header must be store_id,item_id,week,price");
        PriceTable table;
        while (reader.next(fields)) {
            if (fields.size() != 4) reader.fail("expected 4 fields");
            const long long week = parse_int(reader, fields[2], "week");
            const double price = parse_double(reader, fields[3], "price");
            if (week < 1) reader.fail("week must be >= 1");
            if (!(price >= 0.0)) reader.fail("price must be non-negative");
            table.add(fields[0], fields[1], week, price);
        }
        return table;
    }

    static PriceTable from_csv_file(const std::string& path) {
        std::ifstream in = open_input(path);
        return from_csv(in, path);
    }

private:
    static std::string key(const std::string& store, const std::string& item) {
        return store + "\x1f" + item;
    }
    std::map<std::string, std::map<long long, double>> prices_;
};

/// Dollar sales of one bottom series over its last `window` in-sample days.
inline double dollar_sales(const SalesSeries& s, const PriceTable& prices, std::size_t window = 28) {
    const std::size_t T = s.values.size();
    const std::size_t start = T > window ? T - window : 0;
    double revenue = 0.0;
    for (std::size_t t = start; t < T; ++t) {
        const long long week = static_cast<long long>(t / 7) + 1;
        revenue += static_cast<double>(s.values[t]) * prices.price(s.store, s.item, week);
    }
    return revenue;
}

} // namespace skucast
