#pragma once

#include "bizmeta/linkage.hpp"

namespace bizmeta {

// Central-bank demonstration data set: organisational entities and their
// goals, the bank hierarchy, measures with quarterly facts for four banks
// (1999-Q1 .. 2001-Q2), the NPA concept with one definition change on
// 2000-07-01, XYZ Bank re-typed from Rural to Nationalized on 2000-10-01 after
// absorbing PQR Bank, and the events around that merger.
//
// Concept ids are readable ("dept_bsd", "npa", "meas_npa", "bank_xyz", ...).
void seed_demo(Repository& repo);

Repository demo_repository();

}  // namespace bizmeta
