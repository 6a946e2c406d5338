#include "pretouch/engine.hpp"

#include <stdexcept>

namespace pretouch::net {

wire::Render idle_render() {
    return {CursorState{}, 0, {}, false};
}

Engine::Engine(EngineSettings settings, Sink sink) : settings_(std::move(settings)), sink_(std::move(sink)) {}

std::string Engine::session_key(ConnectionId from, const std::optional<std::string>& name) const {
    return name ? "named:" + *name : "conn:" + std::to_string(from);
}

std::shared_ptr<Engine::Slot> Engine::find(const std::string& key) const {
    std::lock_guard lock(registry_mutex_);
    const auto it = registry_.find(key);
    return it == registry_.end() ? nullptr : it->second;
}

std::size_t Engine::session_count() const {
    std::lock_guard lock(registry_mutex_);
    return registry_.size();
}

void Engine::error(ConnectionId to, std::uint64_t seq, std::string field, std::string message) {
    sink_(to, wire::Error{std::move(field), std::move(message), seq});
}

void Engine::handle(ConnectionId from, std::uint64_t seq, const wire::Message& message) {
    if (const auto* control = std::get_if<wire::Control>(&message)) {
        on_control(from, seq, *control);
    } else if (const auto* sample = std::get_if<wire::Sample>(&message)) {
        on_sample(from, seq, *sample);
    } else {
        error(from, seq, "type", "engine does not accept " + std::string(wire::tag_of(message)) + " messages");
    }
}

void Engine::on_control(ConnectionId from, std::uint64_t seq, const wire::Control& control) {
    const std::string key = session_key(from, control.session);
    using wire::ControlAction;

    if (control.action == ControlAction::Start) {
        auto slot = std::make_shared<Slot>();
        slot->config = settings_.decoder_config(control.technique);
        slot->config.feedback_mode = control.feedback_mode;
        slot->t_start = control.t_start;
        std::vector<int> digits;
        if (control.secret) {
            digits = *control.secret;
        } else if (auto it = settings_.secrets.find(std::string(to_string(control.technique)));
                   it != settings_.secrets.end()) {
            digits = it->second;
        } else {
            error(from, seq, "secret", "no enrolled secret for " + std::string(to_string(control.technique)));
            return;
        }
        slot->secret = {control.technique, digits};
        try {
            if (control.technique != Technique::Pin) to_pattern(slot->secret);
            slot->session.emplace(slot->config, slot->secret, slot->t_start);
        } catch (const std::exception& e) {
            error(from, seq, "secret", e.what());
            return;
        }
        std::shared_ptr<Slot> previous;
        {
            std::lock_guard lock(registry_mutex_);
            auto& entry = registry_[key];
            previous = entry;
            entry = slot;
        }
        if (previous) {
            std::lock_guard lock(previous->mutex);
            slot->subscribers = previous->subscribers;
        }
        slot->subscribers.insert(from);
        return;
    }

    const auto slot = find(key);
    if (!slot) {
        error(from, seq, "session", "no active session");
        return;
    }
    if (control.action == ControlAction::Cancel) {
        {
            std::lock_guard reg(registry_mutex_);
            const auto it = registry_.find(key);
            if (it != registry_.end() && it->second == slot) registry_.erase(it);
        }
        std::lock_guard lock(slot->mutex);
        slot->session.reset();
        return;
    }
    std::lock_guard lock(slot->mutex);
    slot->subscribers.insert(from);
    switch (control.action) {
        case ControlAction::Reset:
            slot->session.emplace(slot->config, slot->secret, slot->t_start);
            for (auto to : slot->subscribers) sink_(to, idle_render());
            break;
        case ControlAction::Submit:
            if (!slot->session || slot->session->submitted()) break;
            if (slot->session->selected_count() == 0) {
                error(from, seq, "action", "cannot submit before any selection");
                break;
            }
            slot->session->submit();
            publish_result(*slot);
            break;
        case ControlAction::Start:
        case ControlAction::Cancel: break;
    }
}

void Engine::on_sample(ConnectionId from, std::uint64_t seq, const wire::Sample& sample) {
    const auto slot = find(session_key(from, sample.session));
    if (!slot) {
        error(from, seq, "session", "no active session");
        return;
    }
    std::lock_guard lock(slot->mutex);
    if (!slot->session) {
        error(from, seq, "session", "no active session");
        return;
    }
    // Samples after submission are dropped until the next start/reset.
    if (slot->session->submitted()) return;

    FingerSample local;
    try {
        local = to_local({sample.t, sample.finger, Frame::World, sample.touch}, sample.pose);
    } catch (const std::exception& e) {
        error(from, seq, "pose", e.what());
        return;
    }
    FeedOutput out;
    try {
        out = slot->session->feed(local);
    } catch (const DecodeError& e) {
        error(from, seq, "t", e.what());
        return;
    }
    const wire::Render render{out.cursor, slot->session->selected_count(), slot->session->feedback_lines(),
                              !out.selections.empty()};
    for (auto to : slot->subscribers) sink_(to, render);
    if (out.submitted) publish_result(*slot);
}

void Engine::publish_result(Slot& slot) {
    const DecodeResult& r = *slot.session->result();
    wire::Result result;
    result.outcome = r.outcome;
    result.metrics = session_metrics(r.log);
    if (settings_.debug) {
        result.entered = r.entered.digits;
        result.events = r.events;
        result.violations = r.violations;
        result.log = r.log;
    }
    for (auto to : slot.subscribers) sink_(to, result);
}

void Engine::disconnect(ConnectionId id) {
    std::lock_guard lock(registry_mutex_);
    for (auto it = registry_.begin(); it != registry_.end();) {
        {
            std::lock_guard slot_lock(it->second->mutex);
            it->second->subscribers.erase(id);
        }
        if (it->first == session_key(id, std::nullopt))
            it = registry_.erase(it);
        else
            ++it;
    }
}

}  // namespace pretouch::net
