#pragma once

#include "procmine/petri.hpp"

namespace procmine {

// Hand-authored reference model of the sepsis emergency-ward process.
//
// Main flow: ER Registration, then skippable ER Triage and ER Sepsis Triage
// stages, then an optional concurrent block for IV Liquid / IV Antibiotics
// (either order, either skippable), then a stay place carrying Admission NC /
// Admission IC as self-loops (admissions, transfers and readmissions in any
// order), then an exclusive choice among Release A-E or a silent skip, with an
// optional Return ER loop back to the stay.  Lab activities (CRP, Leukocytes,
// LacticAcid) are self-loops on a shared lab place fed by ER Registration, so
// measurements replay in parallel with the rest of the case at any point.
inline PetriNet build_systematic_model() {
    PetriNet net;
    int p_start = net.add_place("start");
    int p_lab = net.add_place("lab");
    int p_registered = net.add_place("registered");
    int p_triaged = net.add_place("triaged");
    int p_screened = net.add_place("screened");
    int p_liquid_pending = net.add_place("liquid_pending");
    int p_liquid_done = net.add_place("liquid_done");
    int p_antibiotics_pending = net.add_place("antibiotics_pending");
    int p_antibiotics_done = net.add_place("antibiotics_done");
    int p_stay = net.add_place("stay");
    int p_released = net.add_place("released");
    int p_end = net.add_place("end");

    auto chain = [&](const std::string& id, const std::string& label, int from, int to) {
        int t = net.add_transition(id, label);
        net.add_arc_pt(from, t);
        net.add_arc_tp(t, to);
        return t;
    };

    int t_register = net.add_transition("ER Registration", "ER Registration");
    net.add_arc_pt(p_start, t_register);
    net.add_arc_tp(t_register, p_registered);
    net.add_arc_tp(t_register, p_lab);

    chain("ER Triage", "ER Triage", p_registered, p_triaged);
    chain("skip_triage", "", p_registered, p_triaged);
    chain("ER Sepsis Triage", "ER Sepsis Triage", p_triaged, p_screened);
    chain("skip_sepsis_triage", "", p_triaged, p_screened);

    int t_split = net.add_transition("iv_split", "");
    net.add_arc_pt(p_screened, t_split);
    net.add_arc_tp(t_split, p_liquid_pending);
    net.add_arc_tp(t_split, p_antibiotics_pending);
    chain("IV Liquid", "IV Liquid", p_liquid_pending, p_liquid_done);
    chain("skip_iv_liquid", "", p_liquid_pending, p_liquid_done);
    chain("IV Antibiotics", "IV Antibiotics", p_antibiotics_pending, p_antibiotics_done);
    chain("skip_iv_antibiotics", "", p_antibiotics_pending, p_antibiotics_done);
    int t_join = net.add_transition("iv_join", "");
    net.add_arc_pt(p_liquid_done, t_join);
    net.add_arc_pt(p_antibiotics_done, t_join);
    net.add_arc_tp(t_join, p_stay);

    chain("Admission NC", "Admission NC", p_stay, p_stay);
    chain("Admission IC", "Admission IC", p_stay, p_stay);

    chain("Release A", "Release A", p_stay, p_released);
    chain("Release B", "Release B", p_stay, p_released);
    chain("Release C", "Release C", p_stay, p_released);
    chain("Release D", "Release D", p_stay, p_released);
    chain("Release E", "Release E", p_stay, p_released);
    chain("skip_release", "", p_stay, p_released);
    chain("Return ER", "Return ER", p_released, p_stay);

    chain("CRP", "CRP", p_lab, p_lab);
    chain("Leukocytes", "Leukocytes", p_lab, p_lab);
    chain("LacticAcid", "LacticAcid", p_lab, p_lab);

    int t_finish = net.add_transition("finish", "");
    net.add_arc_pt(p_released, t_finish);
    net.add_arc_pt(p_lab, t_finish);
    net.add_arc_tp(t_finish, p_end);

    net.initial_marking.tokens[static_cast<std::size_t>(p_start)] = 1;
    net.final_marking.tokens[static_cast<std::size_t>(p_end)] = 1;
    validate_net(net);
    return net;
}

}  // namespace procmine
