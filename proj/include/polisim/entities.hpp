#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "polisim/money.hpp"
#include "polisim/tables.hpp"

namespace polisim {

using Id = std::uint32_t;
inline constexpr Id kNone = std::numeric_limits<Id>::max();

enum class Gender : std::uint8_t { female = 0, male = 1 };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Person {
  Id id = kNone;
  int age_months = 0;
  Gender gender = Gender::female;
  int birthday_month = 0;  // 0..11
  int qualification = 1;   // 1..5, fixed for life
  Money cash;
  Money wage;  // last net wage
  Id employer = kNone;
  Id household = kNone;
  Id origin_household = kNone;  // household left at marriage, used for inheritance
  Id spouse = kNone;
  bool has_car = false;
  bool alive = true;
  int last_labor_month = -1;

  int age_years() const { return age_months / 12; }
  bool employed() const { return employer != kNone; }
};

struct Household {
  Id id = kNone;
  std::vector<Id> members;
  Id dwelling = kNone;
  std::vector<Id> owned;
  Money reserve;  // cash kept at home, no interest
  Money savings;  // deposit claim on the bank
  Money rent;     // rent of the current contract when renting
  bool renting = false;
  Id loan = kNone;
  Id voucher = kNone;
  Id parent = kNone;  // household this one split from

  // Running mean of monthly household income over all recorded months.
  double income_mean = 0.0;
  int income_months = 0;
  Money income_month;  // accumulates during the current month

  double permanent_income = 0.0;
  std::array<double, 12> pi_history{};
  int pi_count = 0;

  bool active = true;
  bool null_consumption = false;
  bool rent_default = false;
  bool moved = false;  // completed a housing transaction this month
  int last_goods_month = -1;
  int last_rental_month = -1;
  int last_sales_month = -1;

  double prior_year_pi() const;
};

enum class FirmKind : std::uint8_t { consumer, construction };

struct ConstructionProject {
  Id region = kNone;
  double size = 0.0;
  int quality = 1;
  double total_cost = 0.0;  // currency value of work
  double remaining = 0.0;
  Money license_paid;
};

struct Firm {
  Id id = kNone;
  Id region = kNone;
  FirmKind kind = FirmKind::consumer;
  Money cash;
  double inventory = 0.0;
  double price = 1.0;
  std::vector<Id> employees;
  Money revenue;        // accumulated since the last payroll
  Money last_revenue;   // revenue closed at the last payroll (monthly TR)
  Money profit;         // last closed profit
  Money wage_pool;      // gross wages paid at the last payroll (Omega)
  double produced = 0.0;  // since the last price review
  double sold = 0.0;
  std::vector<ConstructionProject> projects;
};

enum class Listing : std::uint8_t { none, rental, sale };

struct Dwelling {
  Id id = kNone;
  Id region = kNone;
  double size = 0.0;  // 20..120
  int quality = 1;    // 1..4
  Id owner_household = kNone;
  Id owner_firm = kNone;  // set while a builder still holds it
  Id occupant = kNone;
  Listing listing = Listing::none;
  int months_listed = 0;
  bool force_sale = false;
  double value = 0.0;  // current asking-price rule at T = 0
  double ask = 0.0;    // with time-on-market decay
};

struct Region {
  Id id = kNone;
  Id municipality = kNone;
  Point location;
  double qli = 0.7;
  double income_index = 0.0;  // normalized neighborhood income in [0, 1]
  double license_price = 1.0;
  int licenses = 0;
  double license_rate = 0.0;  // new licenses issued per month
  double license_accrual = 0.0;
  double avg_household_size = 3.0;
  std::array<double, kQualificationLevels> qualification_cdf{};
  double population_weight = 0.0;
};

struct TaxReceipts {
  Money consumption;
  Money labor;
  Money firm;
  Money transaction;
  Money property;
  Money license;

  Money total() const { return consumption + labor + firm + transaction + property + license; }
};

struct Municipality {
  Id id = kNone;
  std::vector<Id> regions;
  Money treasury;        // includes the policy carry-over
  Money policy_carry;    // portion of treasury reserved for policy
  Money voucher_escrow;  // committed to live vouchers
  TaxReceipts receipts;  // current month
  double hdi = 0.7;
  std::int64_t pop_prev = 0;
  std::vector<Id> policy_register;  // poorest first

  // Last month's budget split, for the exactness invariant.
  Money last_taxes;
  Money last_qli_investment;
  Money last_policy_outlay;
  Money last_carry_in;
  Money last_carry_out;
  int last_beneficiaries = 0;
};

struct Loan {
  Id id = kNone;
  Id household = kNone;
  Money principal;
  Money outstanding;
  double rate = 0.0;
  int term = 0;
  int remaining = 0;
  Money payment;
  Money arrears;
  bool active = false;
  int origination_month = 0;
};

struct Bank {
  Money cash;
  std::vector<Loan> loans;
  Money interest_paid;      // cumulative on deposits
  Money interest_received;  // cumulative on loans
  Money written_off;
};

struct Voucher {
  Id id = kNone;
  Id household = kNone;
  Id dwelling = kNone;
  Id municipality = kNone;
  Money monthly;
  int months_remaining = 0;
  Money escrow;
  bool active = false;
};

}  // namespace polisim
