#pragma once

#include "efp/instance.hpp"
#include "efp/outcome.hpp"
#include "efp/verify.hpp"

namespace efp {

// Replays an outcome's event trace against the instance and checks the
// structural guarantees the auction claims for every event, plus the
// whole-run invariants:
//
// high-budget runs
//   - allocation/payments are exactly the trace's sales
//   - each buyer pays one price per item
//   - no preferred item of a served buyer was ever sold below her price
//   - unserved buyers only saw their items sold or removed at or above
//     their valuation
//   - at every above-price event the stranded items are no more numerous
//     than the reachable buyers, reachable buyers receive exactly their
//     demand, and every exact-price event sells all its stranded items
//
// low-budget runs
//   - unserved buyers only saw their items sold strictly above their budget
//   - a buyer with positive demand at a price where one of her items sells
//     is served at that event unless she bought at an earlier price
//   - within an event no buyer prefers another event bundle she could pay
//   - branch bookkeeping: group budget-mass comparisons match the recorded
//     branch, fallback events really had no unit assignment, and each buyer
//     is classified by at most one branch over the run
CheckResult audit_trace(const Instance& inst, const Outcome& out);

}  // namespace efp
