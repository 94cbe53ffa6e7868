#pragma once

#include "pal/pal.hpp"

namespace pal::fixtures {

/// Two-by-two abstraction of the three-by-two building: four states s_ij
/// with perception means at the room centers <i - 0.5, j - 0.5>, broad
/// initial covariances, and a transition function that wrongly assumes all
/// four rooms are mutually open. The underlying building walls off room
/// (2, 2) from (1, 2) and (2, 1).
Session two_room_session(double sigma_floor = 0.01);

/// Goal state s22 of the two-room session.
StateId two_room_goal(const Session& s);

/// Six-state model of the same building with the right column discovered:
/// perception means at all six room centers, action-noise-tight covariances,
/// and geometrically correct transitions (blocked moves as self loops).
/// Room (2, 2) was never entered, so its state keeps the broad initial
/// covariance and no outgoing transitions.
Session six_room_session(double sigma_floor = 1e-4);

/// One room, one state, perceptions equal to the action noise, every move a
/// self loop. This model is exactly coherent with its world.
Session perfect_room_session();

/// Five-by-five randomly walled building with a two-state initial model:
/// the start state perceived at the entrance room and a goal state at
/// `goal` (room centers). gamma starts empty.
Session five_by_five_session(std::uint64_t seed, Cell goal, double sigma_floor = 1e-4);

/// Ten-by-ten building with five packs and the full product state space
/// over room column, room row, and carried-pack count. gamma starts empty.
Session pack_world_session(std::uint64_t seed, double sigma_floor = 1e-4);

/// Appends a fresh value to variable `var` and interns one new state equal
/// to state 0 except for that value, perceived at mu with the initial
/// covariance. Returns the new state's id.
StateId add_state(Session& s, std::size_t var, const Eigen::Vector2d& mu);

}  // namespace pal::fixtures
