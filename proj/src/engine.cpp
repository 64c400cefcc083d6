#include "netplay/sim.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace netplay {

namespace {

std::string with_article(const std::string& name) {
    if (name.empty()) return name;
    if (std::isdigit(static_cast<unsigned char>(name[0]))) return name;
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
    const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
    return (vowel ? "an " : "a ") + name;
}

std::string the(const std::string& name) { return "the " + name; }

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

char next_free_letter(const PlayerState& p) {
    for (char c = 'a'; c <= 'z'; ++c) {
        if (!p.item(c)) return c;
    }
    for (char c = 'A'; c <= 'Z'; ++c) {
        if (!p.item(c)) return c;
    }
    return 0;
}

// Normalizes a PressKey payload: single letters stay as-is, special keys map to names.
std::optional<std::string> normalize_key(const std::string& raw) {
    const std::string t = trim(raw);
    if (t.size() == 1 && std::isalpha(static_cast<unsigned char>(t[0]))) return t;
    const std::string u = lowercase(t);
    if (u == "esc" || u == "escape") return std::string("ESC");
    if (u == "space" || u == " ") return std::string("SPACE");
    if (u == "enter" || u == "return") return std::string("ENTER");
    if (t.empty() && raw == " ") return std::string("SPACE");
    return std::nullopt;
}

class Engine {
public:
    Engine(GameState& s, StepResult& r) : s_(s), r_(r) {}

    void dispatch(const Action& a);
    void menu_input(const Action& a);
    void advance_world();
    void check_win();

private:
    GameState& s_;
    StepResult& r_;

    PlayerState& pl() { return s_.player; }
    LevelMap& lvl() { return s_.level(); }

    void msg(std::string m) { r_.messages.push_back(std::move(m)); }
    void invalid(std::string m) {
        r_.invalid = true;
        msg(std::move(m));
    }
    void took_turn() { r_.turn_delta = std::max(r_.turn_delta, 1); }
    void log(std::string verb, std::string subject) {
        s_.history.push_back({s_.turn, std::move(verb), std::move(subject)});
    }
    void open_menu(MenuState m) { s_.open_menu = std::move(m); }
    void prompt_direction(MenuPurpose purpose, char letter, const std::string& prompt) {
        MenuState m;
        m.kind = MenuKind::DirectionPrompt;
        m.purpose = purpose;
        m.prompt = prompt + " [hjklyubn or s for self]";
        m.item_letter = letter;
        msg(m.prompt);
        open_menu(std::move(m));
    }

    int player_damage() const;
    void kill_player(const std::string& cause) {
        if (s_.done.status != RunStatus::Running) return;
        s_.done = {RunStatus::Dead, cause};
        msg("You die...");
    }
    void damage_player(int amount, const std::string& cause) {
        pl().hp -= amount;
        if (pl().hp <= 0) kill_player(cause);
    }
    void gain_xp(int points);
    void hit_monster(Monster& m, int dmg, bool by_player, const std::string& verb);
    void monster_dies(const Monster& m, bool by_player);
    void place_item(Pos p, Item item);
    Item take_from_inventory(char letter);
    void add_to_inventory(Item item);
    std::optional<Pos> random_free_tile(bool need_floor_like);
    void teleport_player();

    void do_move(Dir d);
    void do_pickup();
    void do_drop(char letter);
    void do_wield(char letter);
    void do_eat(char letter);
    void do_quaff(char letter);
    void do_zap(char letter, Dir d);
    void do_apply(char letter, std::optional<Dir> d);
    void do_kick(Dir d);
    void do_open(Dir d);
    void do_close(Dir d);
    void do_pray();
    void do_search();
    void do_stairs(bool down);
    void do_read(char letter);
    void do_put_on(char letter);
    void do_engrave(const std::string& text);
    void remove_boulder(Pos p);
    void destroy_statue(Pos p);
    void arrive_on_level(int depth, TileKind arrival);

    void commit_menu(MenuState m, std::optional<Dir> dir, const std::string& text);

    void monster_turns();
    void move_monster_toward(Monster& m, const std::vector<int>& dist, bool use_dist, Pos goal);
    void random_step(Monster& m);
    bool free_for_monster(Pos p) const;
};

int Engine::player_damage() const {
    const PlayerState& p = s_.player;
    if (!p.form.empty()) {
        if (const auto* st = monster_stats(p.form)) return st->damage;
    }
    if (p.wielded) {
        if (const Item* w = p.item(p.wielded); w && w->damage > 0) return w->damage;
    }
    return 2;
}

void Engine::gain_xp(int points) {
    const int before = pl().xp_level;
    pl().xp_points += points;
    pl().xp_level = xp_level_for(pl().xp_points);
    for (int lv = before + 1; lv <= pl().xp_level; ++lv) {
        pl().max_hp += 6;
        pl().hp += 6;
        msg("Welcome to experience level " + std::to_string(lv) + ".");
    }
}

void Engine::place_item(Pos p, Item item) {
    item.letter = 0;
    lvl().piles[p].push_back(std::move(item));
}

Item Engine::take_from_inventory(char letter) {
    auto& inv = pl().inventory;
    auto it = std::find_if(inv.begin(), inv.end(), [&](const Item& i) { return i.letter == letter; });
    Item out = std::move(*it);
    inv.erase(it);
    if (pl().wielded == letter) pl().wielded = 0;
    if (pl().worn_ring == letter) pl().worn_ring = 0;
    out.letter = 0;
    return out;
}

void Engine::add_to_inventory(Item item) {
    if (item.kind == ItemKind::Gold) {
        pl().gold += item.amount;
        msg(std::to_string(item.amount) + " gold piece" + (item.amount == 1 ? "." : "s."));
        return;
    }
    item.letter = next_free_letter(pl());
    msg(std::string(1, item.letter) + " - " + with_article(item.display_name()) + ".");
    pl().inventory.push_back(std::move(item));
}

void Engine::monster_dies(const Monster& m, bool by_player) {
    const Pos at = m.pos;
    std::vector<Item> drops = m.inventory;
    const std::string kind = m.kind;
    const int xp = m.xp_value;
    auto& mons = lvl().monsters;
    mons.erase(std::remove_if(mons.begin(), mons.end(), [&](const Monster& x) { return x.id == m.id; }), mons.end());
    if (auto corpse = make_item(kind + " corpse")) {
        corpse->id = s_.next_id++;
        corpse->kill_turn = s_.turn;
        place_item(at, std::move(*corpse));
    }
    for (auto& d : drops) place_item(at, std::move(d));
    if (by_player) {
        log("kill", kind);
        gain_xp(xp);
    } else {
        log("death", kind);
    }
}

void Engine::hit_monster(Monster& m, int dmg, bool by_player, const std::string& verb) {
    m.hp -= dmg;
    if (m.attitude == Attitude::Peaceful && by_player) m.attitude = Attitude::Hostile;
    if (m.hp <= 0) {
        msg(by_player ? "You kill " + the(m.kind) + "!" : capitalize(the(m.kind)) + " is killed!");
        const Monster copy = m;
        monster_dies(copy, by_player);
    } else {
        msg(verb);
    }
}

std::optional<Pos> Engine::random_free_tile(bool need_floor_like) {
    std::vector<Pos> options;
    for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
        const Pos p = pos_of(i);
        const TileKind k = lvl().at(p);
        if (!is_passable(k) || lvl().is_hidden(p)) continue;
        if (need_floor_like && !is_room_interior(k) && k != TileKind::Corridor) continue;
        if (p == pl().pos || lvl().monster_at(p)) continue;
        options.push_back(p);
    }
    if (options.empty()) return std::nullopt;
    return options[static_cast<size_t>(rng_range(s_.rng, 0, static_cast<int>(options.size()) - 1))];
}

void Engine::teleport_player() {
    if (auto p = random_free_tile(true)) {
        pl().pos = *p;
        msg("You feel a wrenching sensation.");
    } else {
        msg("You shudder for a moment.");
    }
}

// ---------------------------------------------------------------- dispatch

void Engine::dispatch(const Action& a) {
    using T = Action::Type;
    auto need_item = [&](char letter) -> bool {
        if (!letter || !pl().item(letter)) {
            invalid(std::string("You don't have that object") + (letter ? std::string(" (") + letter + ")." : "."));
            return false;
        }
        return true;
    };
    switch (a.type) {
        case T::Move:
            if (!a.dir || *a.dir == Dir::Self) return invalid("You must give a compass direction to move.");
            return do_move(*a.dir);
        case T::Kick:
            if (!a.dir) return prompt_direction(MenuPurpose::Apply, 0, "In what direction do you want to kick?");
            if (*a.dir == Dir::Self) return invalid("You kick at empty space.");
            return do_kick(*a.dir);
        case T::Pickup: return do_pickup();
        case T::Drop:
            if (need_item(a.letter)) do_drop(a.letter);
            return;
        case T::Wield:
            if (need_item(a.letter)) do_wield(a.letter);
            return;
        case T::Eat:
            if (a.letter && !need_item(a.letter)) return;
            return do_eat(a.letter);
        case T::Quaff:
            if (a.letter && !need_item(a.letter)) return;
            return do_quaff(a.letter);
        case T::Zap: {
            if (!need_item(a.letter)) return;
            if (pl().item(a.letter)->kind != ItemKind::Wand) return invalid("That is not a wand.");
            if (!a.dir) return prompt_direction(MenuPurpose::Zap, a.letter, "In what direction?");
            return do_zap(a.letter, *a.dir);
        }
        case T::Apply:
            if (need_item(a.letter)) do_apply(a.letter, a.dir);
            return;
        case T::Pray: return do_pray();
        case T::Search: return do_search();
        case T::Open:
            if (!a.dir) return prompt_direction(MenuPurpose::Open, 0, "In what direction?");
            return do_open(*a.dir);
        case T::Close:
            if (!a.dir) return prompt_direction(MenuPurpose::Close, 0, "In what direction?");
            return do_close(*a.dir);
        case T::GoUp: return do_stairs(false);
        case T::GoDown: return do_stairs(true);
        case T::Engrave: return do_engrave(a.text);
        case T::ReadFloor: {
            auto it = lvl().engravings.find(pl().pos);
            if (it == lvl().engravings.end()) return invalid("You don't see anything written here.");
            msg("Something is written here in the dust. You read: \"" + it->second + "\".");
            return;
        }
        case T::Read:
            if (need_item(a.letter)) do_read(a.letter);
            return;
        case T::PutOn:
            if (need_item(a.letter)) do_put_on(a.letter);
            return;
        case T::Pay: msg("You do not owe anything."); return;
        case T::Cast: msg("You don't know any spells right now."); return;
        case T::PressKey: return invalid("There is no menu to answer.");
        case T::TypeText: return invalid("Nothing is asking for text.");
        case T::Wait:
            took_turn();
            return;
    }
}

void Engine::do_move(Dir d) {
    const Pos target = pl().pos + d;
    if (!in_bounds(target)) return invalid("You cannot go that way.");
    if (Monster* m = lvl().monster_at(target)) {
        switch (m->attitude) {
            case Attitude::Hostile:
                took_turn();
                hit_monster(*m, player_damage(), true, "You hit " + the(m->kind) + ".");
                return;
            case Attitude::Peaceful: {
                MenuState menu;
                menu.kind = MenuKind::ConfirmPrompt;
                menu.purpose = MenuPurpose::AttackPeaceful;
                menu.prompt = "Really attack " + the(m->kind) + "? [yn]";
                menu.entries = {{'y', "yes", false, 0}, {'n', "no", false, 0}};
                menu.target_id = m->id;
                menu.target = target;
                msg(menu.prompt);
                open_menu(std::move(menu));
                return;
            }
            case Attitude::Pet:
                if (pl().carried_weight() > Rules::kCarryCapacity) return invalid("You are carrying too much to move.");
                m->pos = pl().pos;
                pl().pos = target;
                took_turn();
                msg("You swap places with your " + m->kind + ".");
                return;
        }
    }
    const TileKind k = lvl().at(target);
    const bool phasing = !pl().form.empty() && monster_stats(pl().form) && monster_stats(pl().form)->phases;
    if (!is_passable(k) || lvl().is_hidden(target)) {
        if (phasing && !on_boundary(target) && k != TileKind::Boulder) {
            // walls and doors are no obstacle
        } else if (k == TileKind::Boulder) {
            return invalid("You try to move the boulder, but in vain.");
        } else if (k == TileKind::DoorClosed || k == TileKind::DoorLocked) {
            return invalid("The door is closed.");
        } else {
            return invalid("It's solid stone.");
        }
    }
    if (pl().carried_weight() > Rules::kCarryCapacity) return invalid("You are carrying too much to move.");
    pl().pos = target;
    took_turn();
    if (const auto* pile = lvl().pile(target)) {
        if (pile->size() == 1) {
            msg("You see here " + with_article(pile->front().display_name()) + ".");
        } else {
            msg("There are several objects here.");
        }
    }
    if (lvl().engravings.count(target)) msg("Something is written here in the dust.");
    if (k == TileKind::Fountain) msg("There is a fountain here.");
    if (k == TileKind::Altar) msg("There is an altar here.");
    if (k == TileKind::Statue) msg("There is a statue here.");
}

void Engine::do_pickup() {
    auto it = lvl().piles.find(pl().pos);
    if (it == lvl().piles.end() || it->second.empty()) return invalid("There is nothing here to pick up.");
    auto& pile = it->second;
    if (pile.size() == 1) {
        if (!next_free_letter(pl()) && pile.front().kind != ItemKind::Gold) {
            return invalid("You cannot carry anything more.");
        }
        Item item = std::move(pile.front());
        lvl().piles.erase(it);
        log("pickup", item.name);
        if (!item.identified) log("pickup", item.appearance);
        add_to_inventory(std::move(item));
        took_turn();
        return;
    }
    MenuState menu;
    menu.kind = MenuKind::PickupMulti;
    menu.purpose = MenuPurpose::Pickup;
    menu.prompt = "Pick up what?";
    menu.requires_confirm = true;
    char letter = 'a';
    for (const auto& item : pile) {
        menu.entries.push_back({letter++, item.display_name(), false, item.id});
    }
    msg(menu.prompt);
    open_menu(std::move(menu));
}

void Engine::do_drop(char letter) {
    if (pl().worn_ring == letter) return invalid("You cannot drop something you are wearing.");
    Item item = take_from_inventory(letter);
    msg("You drop " + with_article(item.display_name()) + ".");
    log("drop", item.name);
    place_item(pl().pos, std::move(item));
    took_turn();
}

void Engine::do_wield(char letter) {
    if (pl().wielded == letter) return invalid("You are already wielding that!");
    if (pl().worn_ring == letter) return invalid("You cannot wield something you are wearing.");
    pl().wielded = letter;
    const Item* it = pl().item(letter);
    msg(std::string(1, letter) + " - " + with_article(it->display_name()) + " (weapon in hand).");
    took_turn();
}

void Engine::do_eat(char letter) {
    Item food;
    if (letter) {
        const Item* it = pl().item(letter);
        if (it->kind != ItemKind::FoodRation && it->kind != ItemKind::Corpse) return invalid("You cannot eat that!");
        food = take_from_inventory(letter);
    } else {
        auto it = lvl().piles.find(pl().pos);
        if (it == lvl().piles.end()) return invalid("There is nothing here to eat.");
        auto& pile = it->second;
        auto f = std::find_if(pile.begin(), pile.end(), [](const Item& i) {
            return i.kind == ItemKind::FoodRation || i.kind == ItemKind::Corpse;
        });
        if (f == pile.end()) return invalid("There is nothing here to eat.");
        food = std::move(*f);
        pile.erase(f);
        if (pile.empty()) lvl().piles.erase(it);
    }
    took_turn();
    log("eat", food.name);
    if (food.kind == ItemKind::Corpse && !corpse_is_fresh(food, s_.turn)) {
        msg("Ulch - that meat was tainted! You feel deathly sick.");
        if (!pl().status.count(Status::Ill)) pl().ill_since = s_.turn;
        pl().status.insert(Status::Ill);
        return;
    }
    pl().nutrition = std::min(2000, pl().nutrition + food.nutrition);
    msg(food.kind == ItemKind::FoodRation ? "This food really hits the spot!"
                                          : "This " + food.name + " tastes terrible!");
}

void Engine::do_quaff(char letter) {
    if (!letter) {
        if (lvl().at(pl().pos) != TileKind::Fountain) return invalid("There is no fountain here.");
        took_turn();
        log("drink", "fountain");
        if (rng_chance(s_.rng, 1, 20)) {
            Monster snake;
            const MonsterStats* st = monster_stats("water moccasin");
            for (Dir d : kCompass) {
                const Pos q = pl().pos + d;
                if (in_bounds(q) && is_passable(lvl().at(q)) && !lvl().monster_at(q)) {
                    snake = Monster{s_.next_id++, st->kind, q, st->hp, st->hp, Attitude::Hostile, st->xp, st->damage, {}};
                    lvl().monsters.push_back(snake);
                    msg("An endless stream of snakes pours forth!");
                    return;
                }
            }
        }
        msg("The cool draught refreshes you.");
        pl().nutrition = std::min(2000, pl().nutrition + 10);
        return;
    }
    const Item* it = pl().item(letter);
    if (it->kind != ItemKind::Potion) return invalid("That is a silly thing to drink.");
    Item potion = take_from_inventory(letter);
    took_turn();
    log("drink", potion.name);
    log("drink", "potion");
    switch (static_cast<PotionEffect>(potion.effect)) {
        case PotionEffect::Healing:
            pl().hp += 8;
            if (pl().hp > pl().max_hp) pl().max_hp += 1;
            pl().hp = std::min(pl().hp, pl().max_hp);
            msg("You feel better.");
            break;
        case PotionEffect::ExtraHealing:
            pl().hp += 16;
            if (pl().hp > pl().max_hp) pl().max_hp += 2;
            pl().hp = std::min(pl().hp, pl().max_hp);
            msg("You feel much better.");
            break;
        case PotionEffect::Water: msg("This tastes like water."); break;
        case PotionEffect::Sickness:
            pl().hp = std::max(1, pl().hp - 3);
            msg("Yecch! This stuff tastes like poison.");
            break;
    }
}

void Engine::remove_boulder(Pos p) {
    auto base = lvl().boulder_base.find(p);
    lvl().set(p, base != lvl().boulder_base.end() ? base->second : TileKind::Corridor);
    if (base != lvl().boulder_base.end()) lvl().boulder_base.erase(base);
    log("destroy", "boulder");
    if (auto rock = make_item("rock")) {
        rock->id = s_.next_id++;
        place_item(p, std::move(*rock));
    }
}

void Engine::destroy_statue(Pos p) {
    lvl().set(p, TileKind::Floor);
    log("destroy", "statue");
    if (auto rock = make_item("rock")) {
        rock->id = s_.next_id++;
        place_item(p, std::move(*rock));
    }
}

void Engine::do_zap(char letter, Dir d) {
    Item* wand = pl().item(letter);
    took_turn();
    if (wand->charges <= 0) {
        msg("Nothing happens.");
        return;
    }
    --wand->charges;
    const auto effect = static_cast<WandEffect>(wand->effect);
    log("zap", wand->name);
    if (d == Dir::Self) {
        switch (effect) {
            case WandEffect::Digging: msg("You dig a pit in the floor."); return;
            case WandEffect::Teleportation: teleport_player(); return;
            case WandEffect::Striking:
                msg("You bash yourself!");
                pl().hp = std::max(1, pl().hp - 2);
                return;
            case WandEffect::Polymorph: {
                const Item* ring = pl().worn_ring ? pl().item(pl().worn_ring) : nullptr;
                if (ring && ring->effect == static_cast<int>(RingEffect::PolymorphControl)) {
                    r_.turn_delta = 0;  // the form choice commits the turn
                    MenuState m;
                    m.kind = MenuKind::TextEntry;
                    m.purpose = MenuPurpose::PolymorphForm;
                    m.prompt = "Become what kind of monster? [type the name]";
                    msg(m.prompt);
                    open_menu(std::move(m));
                } else {
                    msg("You feel a little strange.");
                }
                return;
            }
        }
    }
    Pos p = pl().pos;
    bool dug = false;
    for (int i = 0; i < Rules::kRayRange; ++i) {
        p = p + d;
        if (!in_bounds(p) || on_boundary(p)) break;
        const TileKind k = lvl().at(p);
        if (effect == WandEffect::Digging) {
            if (k == TileKind::Wall) {
                lvl().set(p, TileKind::Corridor);
                lvl().hidden[index_of(p)] = 0;
                dug = true;
            } else if (k == TileKind::Boulder) {
                remove_boulder(p);
                dug = true;
            } else if (k == TileKind::DoorClosed || k == TileKind::DoorLocked) {
                lvl().set(p, TileKind::DoorOpen);
                msg("The door is razed!");
            }
            continue;
        }
        if (is_opaque(k)) break;
        if (effect == WandEffect::Striking && k == TileKind::Statue) {
            msg("The statue shatters!");
            destroy_statue(p);
            return;
        }
        Monster* m = lvl().monster_at(p);
        if (!m) continue;
        switch (effect) {
            case WandEffect::Striking:
                hit_monster(*m, 6, true, "The wand hits " + the(m->kind) + ".");
                return;
            case WandEffect::Teleportation: {
                std::vector<Pos> options;
                for (int idx = 0; idx < kMapWidth * kMapHeight; ++idx) {
                    const Pos q = pos_of(idx);
                    if (is_passable(lvl().at(q)) && !lvl().monster_at(q) && q != pl().pos) options.push_back(q);
                }
                if (!options.empty()) {
                    m->pos = options[static_cast<size_t>(rng_range(s_.rng, 0, int(options.size()) - 1))];
                    msg(capitalize(the(m->kind)) + " vanishes!");
                }
                break;
            }
            case WandEffect::Polymorph: {
                const auto& cat = monster_catalog();
                const auto& st = cat[static_cast<size_t>(rng_range(s_.rng, 0, int(cat.size()) - 2))];
                msg(capitalize(the(m->kind)) + " turns into " + with_article(st.kind) + "!");
                m->kind = st.kind;
                m->hp = m->max_hp = st.hp;
                m->damage = st.damage;
                m->xp_value = st.xp;
                break;
            }
            default: break;
        }
    }
    if (effect == WandEffect::Digging) msg(dug ? "You dig through the rock." : "The digging ray fizzles.");
    else if (effect == WandEffect::Striking) msg("The wand misses.");
}

void Engine::do_apply(char letter, std::optional<Dir> d) {
    Item* tool = pl().item(letter);
    if (tool->kind == ItemKind::BagOfHolding) {
        MenuState m;
        m.kind = MenuKind::ContainerLoot;
        m.purpose = MenuPurpose::LootChoice;
        m.prompt = "Do what with the bag of holding? (mark one option, confirm with ENTER)";
        m.requires_confirm = true;
        m.item_letter = letter;
        m.entries = {{'o', "take something out", false, 0}, {'i', "put something in", false, 0}};
        msg(m.prompt);
        open_menu(std::move(m));
        return;
    }
    if (tool->kind != ItemKind::Pickaxe) return invalid("Sorry, I don't know how to use that.");
    if (!d) return prompt_direction(MenuPurpose::Apply, letter, "In what direction do you want to dig?");
    if (*d == Dir::Self) return invalid("You cannot reach the floor.");
    const Pos t = pl().pos + *d;
    if (!in_bounds(t)) return invalid("You cannot dig there.");
    const TileKind k = lvl().at(t);
    if (k == TileKind::Boulder) {
        took_turn();
        msg("You dig through the boulder. It crumbles to rubble.");
        remove_boulder(t);
    } else if (k == TileKind::Wall) {
        if (on_boundary(t)) return invalid("This wall is too hard to dig into.");
        took_turn();
        lvl().set(t, TileKind::Corridor);
        lvl().hidden[index_of(t)] = 0;
        msg("You dig through the wall.");
    } else if (k == TileKind::Statue) {
        took_turn();
        msg("You chip the statue to pieces.");
        destroy_statue(t);
    } else if (is_door(k)) {
        invalid("You cannot dig through a door.");
    } else {
        took_turn();
        msg("You swing your pickaxe through thin air.");
    }
}

void Engine::do_kick(Dir d) {
    const Pos t = pl().pos + d;
    took_turn();
    if (!in_bounds(t)) {
        msg("Ouch! That hurts!");
        return;
    }
    if (Monster* m = lvl().monster_at(t)) {
        hit_monster(*m, 2, true, "You kick " + the(m->kind) + ".");
        return;
    }
    const TileKind k = lvl().at(t);
    if (k == TileKind::DoorClosed || k == TileKind::DoorLocked) {
        if (rng_chance(s_.rng, 1, 3)) {
            lvl().set(t, TileKind::DoorOpen);
            msg("WHAMM!! The door crashes open!");
            log("open", "door");
        } else {
            msg("WHAMM!!");
        }
    } else if (k == TileKind::Wall && lvl().brittle.count(t)) {
        lvl().set(t, TileKind::Corridor);
        lvl().brittle.erase(t);
        msg("WHAMM!! The brittle wall crumbles!");
    } else if (k == TileKind::Boulder) {
        msg("Ouch! That hurts! The boulder does not budge.");
    } else if (k == TileKind::Wall) {
        msg("Ouch! That hurts!");
    } else {
        msg("You kick at empty space.");
    }
}

void Engine::do_open(Dir d) {
    const Pos t = pl().pos + d;
    const TileKind k = lvl().at(t);
    if (k == TileKind::DoorLocked) return invalid("This door is locked.");
    if (k == TileKind::DoorOpen) return invalid("This door is already open.");
    if (k != TileKind::DoorClosed) return invalid("You see no door there.");
    lvl().set(t, TileKind::DoorOpen);
    took_turn();
    msg("The door opens.");
    log("open", "door");
}

void Engine::do_close(Dir d) {
    const Pos t = pl().pos + d;
    const TileKind k = lvl().at(t);
    if (k != TileKind::DoorOpen) return invalid("You see no open door there.");
    if (lvl().monster_at(t) || lvl().pile(t)) return invalid("Something's in the way.");
    lvl().set(t, TileKind::DoorClosed);
    took_turn();
    msg("The door closes.");
}

void Engine::do_pray() {
    took_turn();
    log("pray", "");
    if (pl().prayer_cooldown == 0) {
        msg("You begin praying. You feel a hopeful feeling. You feel much better.");
        pl().hp = pl().max_hp;
        pl().status.erase(Status::Ill);
        pl().nutrition = std::max(pl().nutrition, Rules::kStartNutrition);
    } else {
        msg("You begin praying. You feel that your god is displeased.");
        pl().hp = std::max(1, pl().hp - 3);
    }
    pl().prayer_cooldown = Rules::kPrayerCooldown;
}

void Engine::do_search() {
    took_turn();
    for (Dir d : kCompass) {
        const Pos q = pl().pos + d;
        if (lvl().is_hidden(q) && rng_chance(s_.rng, 1, 3)) {
            lvl().hidden[index_of(q)] = 0;
            msg("You find a hidden passage.");
        }
    }
}

void Engine::arrive_on_level(int depth, TileKind arrival) {
    std::optional<Monster> pet;
    auto& old_mons = lvl().monsters;
    for (auto it = old_mons.begin(); it != old_mons.end(); ++it) {
        if (it->attitude == Attitude::Pet) {
            pet = *it;
            old_mons.erase(it);
            break;
        }
    }
    pl().depth = depth;
    pl().max_depth = std::max(pl().max_depth, depth);
    for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
        if (lvl().tiles[static_cast<size_t>(i)] == arrival) {
            pl().pos = pos_of(i);
            break;
        }
    }
    if (Monster* squatter = lvl().monster_at(pl().pos)) {
        for (Dir d : kCompass) {
            const Pos q = pl().pos + d;
            if (is_passable(lvl().at(q)) && !lvl().monster_at(q)) {
                squatter->pos = q;
                break;
            }
        }
    }
    if (pet) {
        for (Dir d : kCompass) {
            const Pos q = pl().pos + d;
            if (in_bounds(q) && is_passable(lvl().at(q)) && !lvl().monster_at(q)) {
                pet->pos = q;
                lvl().monsters.push_back(*pet);
                break;
            }
        }
    }
}

void Engine::do_stairs(bool down) {
    const TileKind here = lvl().at(pl().pos);
    if (down) {
        if (here != TileKind::StairsDown) return invalid("You can't go down here.");
        if (pl().depth >= static_cast<int>(s_.levels.size())) return invalid("The stairs are blocked by rubble.");
        took_turn();
        arrive_on_level(pl().depth + 1, TileKind::StairsUp);
        msg("You descend to level " + std::to_string(pl().depth) + ".");
        log("descend", std::to_string(pl().depth));
        return;
    }
    if (here != TileKind::StairsUp) return invalid("You can't go up here.");
    if (pl().depth == 1) return invalid("You cannot leave the dungeon this way.");
    took_turn();
    arrive_on_level(pl().depth - 1, TileKind::StairsDown);
    msg("You climb up to level " + std::to_string(pl().depth) + ".");
}

void Engine::do_read(char letter) {
    const Item* it = pl().item(letter);
    if (it->kind != ItemKind::Scroll) return invalid("That is a silly thing to read.");
    Item scroll = take_from_inventory(letter);
    log("read", scroll.name);
    took_turn();
    switch (static_cast<ScrollEffect>(scroll.effect)) {
        case ScrollEffect::Light: msg("A lit field surrounds you!"); return;
        case ScrollEffect::Teleportation: teleport_player(); return;
        case ScrollEffect::Identify: {
            MenuState m;
            m.kind = MenuKind::PickupMulti;
            m.purpose = MenuPurpose::Identify;
            m.prompt = "This is an identify scroll. What would you like to identify first?";
            m.requires_confirm = true;
            for (const auto& item : pl().inventory) {
                if (!item.identified) m.entries.push_back({item.letter, item.display_name(), false, item.id});
            }
            if (m.entries.empty()) {
                msg("This is an identify scroll. You have already identified all of your possessions.");
                return;
            }
            r_.turn_delta = 0;  // committed when the selection is confirmed
            msg(m.prompt);
            open_menu(std::move(m));
            return;
        }
    }
}

void Engine::do_put_on(char letter) {
    const Item* it = pl().item(letter);
    if (it->kind != ItemKind::Ring) return invalid("That is not a ring.");
    if (pl().worn_ring) return invalid("You are already wearing a ring.");
    pl().worn_ring = letter;
    took_turn();
    msg(std::string(1, letter) + " - " + with_article(it->display_name()) + " (on left hand).");
}

void Engine::do_engrave(const std::string& text) {
    if (text.empty()) {
        MenuState m;
        m.kind = MenuKind::TextEntry;
        m.purpose = MenuPurpose::Engrave;
        m.prompt = "What do you want to write in the dust here?";
        msg(m.prompt);
        open_menu(std::move(m));
        return;
    }
    lvl().engravings[pl().pos] = text;
    took_turn();
    log("engrave", text);
    msg("You write in the dust with your fingertip.");
}

// ---------------------------------------------------------------- menus

void Engine::menu_input(const Action& a) {
    MenuState& menu = *s_.open_menu;
    if (a.type == Action::Type::TypeText) {
        if (menu.kind != MenuKind::TextEntry) return invalid("This menu does not accept text; use single keys.");
        MenuState m = menu;
        s_.open_menu.reset();
        return commit_menu(std::move(m), std::nullopt, a.text);
    }
    if (a.type != Action::Type::PressKey) {
        return invalid("A menu is open: answer it with keys or text, or press ESC to cancel.");
    }
    const auto key = normalize_key(a.text);
    if (!key) return invalid("Unsupported key '" + a.text + "': only letters, ESC, SPACE and ENTER.");
    if (*key == "ESC") {
        s_.open_menu.reset();
        msg("Never mind.");
        return;
    }
    switch (menu.kind) {
        case MenuKind::ConfirmPrompt: {
            if (*key == "y") {
                MenuState m = menu;
                s_.open_menu.reset();
                return commit_menu(std::move(m), std::nullopt, {});
            }
            if (*key == "n") {
                s_.open_menu.reset();
                msg("Never mind.");
                return;
            }
            msg("Please answer y or n.");
            return;
        }
        case MenuKind::DirectionPrompt: {
            std::optional<Dir> d = key->size() == 1 ? dir_from_key((*key)[0]) : std::nullopt;
            MenuState m = menu;
            s_.open_menu.reset();
            if (!d) {
                msg("What a strange direction! Never mind.");
                return;
            }
            return commit_menu(std::move(m), d, {});
        }
        case MenuKind::TextEntry: {
            if (*key == "ENTER") {
                MenuState m = menu;
                s_.open_menu.reset();
                return commit_menu(std::move(m), std::nullopt, {});
            }
            msg("Type the text with the text input skill, or press ESC.");
            return;
        }
        case MenuKind::PickupMulti:
        case MenuKind::ContainerLoot: {
            if (*key == "ENTER") {
                MenuState m = menu;
                s_.open_menu.reset();
                return commit_menu(std::move(m), std::nullopt, {});
            }
            if (key->size() == 1) {
                for (auto& e : menu.entries) {
                    if (e.letter == (*key)[0]) {
                        e.marked = !e.marked;
                        return;
                    }
                }
            }
            // SPACE and unknown letters do nothing on a single-page menu.
            return;
        }
    }
}

void Engine::commit_menu(MenuState m, std::optional<Dir> dir, const std::string& text) {
    std::vector<int> marked;
    for (const auto& e : m.entries) {
        if (e.marked) marked.push_back(e.item_id);
    }
    switch (m.purpose) {
        case MenuPurpose::Pickup: {
            if (marked.empty()) {
                msg("Never mind.");
                return;
            }
            auto& pile = lvl().piles[pl().pos];
            for (int id : marked) {
                auto it = std::find_if(pile.begin(), pile.end(), [&](const Item& i) { return i.id == id; });
                if (it == pile.end()) continue;
                if (!next_free_letter(pl()) && it->kind != ItemKind::Gold) {
                    msg("You cannot carry anything more.");
                    break;
                }
                Item item = std::move(*it);
                pile.erase(it);
                log("pickup", item.name);
                if (!item.identified) log("pickup", item.appearance);
                add_to_inventory(std::move(item));
            }
            if (pile.empty()) lvl().piles.erase(pl().pos);
            took_turn();
            return;
        }
        case MenuPurpose::LootChoice: {
            char choice = 0;
            for (const auto& e : m.entries) {
                if (e.marked && !choice) choice = e.letter;
            }
            Item* bag = pl().item(m.item_letter);
            if (!choice || !bag) {
                msg("Never mind.");
                return;
            }
            MenuState next;
            next.kind = MenuKind::ContainerLoot;
            next.requires_confirm = true;
            next.item_letter = m.item_letter;
            if (choice == 'o') {
                if (bag->contents.empty()) {
                    msg("Your bag of holding is empty.");
                    return;
                }
                next.purpose = MenuPurpose::TakeOut;
                next.prompt = "Take out what?";
                char letter = 'a';
                for (const auto& c : bag->contents) next.entries.push_back({letter++, c.display_name(), false, c.id});
            } else {
                next.purpose = MenuPurpose::PutIn;
                next.prompt = "Put in what?";
                next.entries.push_back({'A', "Auto-select every item", false, 0});
                for (const auto& it : pl().inventory) {
                    if (it.letter == m.item_letter) continue;
                    next.entries.push_back({it.letter, it.display_name(), false, it.id});
                }
                if (next.entries.size() == 1) {
                    msg("You don't have anything to put in.");
                    return;
                }
            }
            msg(next.prompt);
            open_menu(std::move(next));
            return;
        }
        case MenuPurpose::PutIn: {
            const bool all = !m.entries.empty() && m.entries.front().letter == 'A' && m.entries.front().marked;
            std::vector<char> letters;
            for (const auto& e : m.entries) {
                if (e.letter == 'A') continue;
                if (all || e.marked) letters.push_back(e.letter);
            }
            if (letters.empty()) {
                msg("Never mind.");
                return;
            }
            int moved = 0;
            for (char l : letters) {
                Item* src = pl().item(l);
                if (!src) continue;
                if (src->kind == ItemKind::BagOfHolding) {
                    msg("You cannot put a bag of holding into another bag.");
                    continue;
                }
                if (pl().worn_ring == l) {
                    msg("You cannot stash something you are wearing.");
                    continue;
                }
                Item item = take_from_inventory(l);
                msg("You put " + with_article(item.display_name()) + " into the bag of holding.");
                log("stash", item.name);
                pl().item(m.item_letter)->contents.push_back(std::move(item));
                ++moved;
            }
            if (moved) took_turn();
            return;
        }
        case MenuPurpose::TakeOut: {
            Item* bag = pl().item(m.item_letter);
            if (!bag || marked.empty()) {
                msg("Never mind.");
                return;
            }
            for (int id : marked) {
                bag = pl().item(m.item_letter);
                auto it = std::find_if(bag->contents.begin(), bag->contents.end(), [&](const Item& i) { return i.id == id; });
                if (it == bag->contents.end()) continue;
                Item item = std::move(*it);
                bag->contents.erase(it);
                add_to_inventory(std::move(item));
            }
            took_turn();
            return;
        }
        case MenuPurpose::Identify: {
            if (marked.empty()) {
                msg("You identify nothing.");
                took_turn();
                return;
            }
            for (auto& it : pl().inventory) {
                if (it.id == marked.front()) {
                    it.identified = true;
                    log("identify", it.name);
                    msg(std::string(1, it.letter) + " - " + with_article(it.name) + ".");
                }
            }
            took_turn();
            return;
        }
        case MenuPurpose::Zap:
            if (!pl().item(m.item_letter)) return invalid("You no longer have that wand.");
            return do_zap(m.item_letter, *dir);
        case MenuPurpose::Apply:
            if (m.item_letter == 0) {
                if (*dir == Dir::Self) return invalid("You kick at empty space.");
                return do_kick(*dir);
            }
            if (!pl().item(m.item_letter)) return invalid("You no longer have that tool.");
            return do_apply(m.item_letter, dir);
        case MenuPurpose::Open:
            if (*dir == Dir::Self) return invalid("You see no door there.");
            return do_open(*dir);
        case MenuPurpose::Close:
            if (*dir == Dir::Self) return invalid("You see no open door there.");
            return do_close(*dir);
        case MenuPurpose::AttackPeaceful: {
            took_turn();
            for (auto& mon : lvl().monsters) {
                if (mon.id == m.target_id) {
                    hit_monster(mon, player_damage(), true, "You hit " + the(mon.kind) + ".");
                    return;
                }
            }
            msg("You attack thin air.");
            return;
        }
        case MenuPurpose::PolymorphForm: {
            took_turn();
            const MonsterStats* st = monster_stats(text);
            if (!st || st->kind == "shopkeeper") {
                msg("You feel a little strange.");
                return;
            }
            pl().form = st->kind;
            msg("You turn into " + with_article(st->kind) + "!");
            log("polymorph", st->kind);
            return;
        }
        case MenuPurpose::Engrave:
            return do_engrave(text.empty() ? std::string("x") : text);
    }
}

// ---------------------------------------------------------------- world

bool Engine::free_for_monster(Pos p) const {
    const LevelMap& L = s_.level();
    return in_bounds(p) && is_passable(L.at(p)) && !L.is_hidden(p) && !L.monster_at(p) && p != s_.player.pos;
}

void Engine::random_step(Monster& m) {
    const int pick = rng_range(s_.rng, 0, 7);
    const Pos q = m.pos + kCompass[pick];
    if (free_for_monster(q)) m.pos = q;
}

void Engine::move_monster_toward(Monster& m, const std::vector<int>& dist, bool use_dist, Pos goal) {
    Pos best = m.pos;
    int best_score = use_dist ? dist[static_cast<size_t>(index_of(m.pos))] : chebyshev(m.pos, goal);
    if (best_score < 0) best_score = 1 << 20;
    for (Dir d : kCompass) {
        const Pos q = m.pos + d;
        if (!free_for_monster(q)) continue;
        int score = use_dist ? dist[static_cast<size_t>(index_of(q))] : chebyshev(q, goal);
        if (score < 0) continue;
        if (score < best_score) {
            best_score = score;
            best = q;
        }
    }
    m.pos = best;
}

void Engine::monster_turns() {
    LevelMap& L = lvl();
    const Pos player = pl().pos;
    // Distance field from the player over passable terrain (monsters ignored).
    std::vector<int> dist(static_cast<size_t>(kMapWidth * kMapHeight), -1);
    std::deque<Pos> q{player};
    dist[static_cast<size_t>(index_of(player))] = 0;
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        const int dp = dist[static_cast<size_t>(index_of(p))];
        if (dp >= 20) continue;
        for (Dir d : kCompass) {
            const Pos n = p + d;
            if (!in_bounds(n) || dist[static_cast<size_t>(index_of(n))] >= 0) continue;
            if (!is_passable(L.at(n)) || L.is_hidden(n)) continue;
            dist[static_cast<size_t>(index_of(n))] = dp + 1;
            q.push_back(n);
        }
    }

    std::vector<int> ids;
    for (const auto& m : L.monsters) ids.push_back(m.id);
    for (int id : ids) {
        if (!s_.running()) return;
        auto it = std::find_if(L.monsters.begin(), L.monsters.end(), [&](const Monster& m) { return m.id == id; });
        if (it == L.monsters.end()) continue;
        Monster& m = *it;
        const MonsterStats* st = monster_stats(m.kind);
        const bool stationary = st && st->stationary;
        switch (m.attitude) {
            case Attitude::Hostile: {
                if (chebyshev(m.pos, player) == 1) {
                    msg("The " + m.kind + " hits!");
                    damage_player(m.damage, "killed by " + with_article(m.kind));
                    break;
                }
                if (stationary) break;
                const int dm = dist[static_cast<size_t>(index_of(m.pos))];
                if (dm >= 0 && dm <= 12) {
                    move_monster_toward(m, dist, true, player);
                } else if (rng_chance(s_.rng, 1, 3)) {
                    random_step(m);
                }
                break;
            }
            case Attitude::Peaceful:
                if (!stationary && rng_chance(s_.rng, 1, 4)) random_step(m);
                break;
            case Attitude::Pet: {
                Monster* foe = nullptr;
                for (Dir d : kCompass) {
                    Monster* o = L.monster_at(m.pos + d);
                    if (o && o->attitude == Attitude::Hostile) {
                        foe = o;
                        break;
                    }
                }
                if (foe) {
                    const int foe_id = foe->id;
                    foe->hp -= m.damage;
                    if (foe->hp <= 0) {
                        const Monster copy = *foe;
                        monster_dies(copy, false);
                    }
                    (void)foe_id;
                    break;
                }
                // Pets fetch weapons lying nearby when their mouth is empty.
                std::optional<Pos> fetch;
                if (m.inventory.empty()) {
                    int best = 5;
                    for (const auto& [p, pile] : L.piles) {
                        if (p == player || pile.empty()) continue;
                        const bool weapon = std::any_of(pile.begin(), pile.end(),
                                                        [](const Item& i) { return i.kind == ItemKind::Weapon; });
                        if (weapon && chebyshev(p, m.pos) < best) {
                            best = chebyshev(p, m.pos);
                            fetch = p;
                        }
                    }
                }
                if (fetch) {
                    if (*fetch != m.pos) move_monster_toward(m, dist, false, *fetch);
                } else if (chebyshev(m.pos, player) > 2) {
                    move_monster_toward(m, dist, true, player);
                } else if (rng_chance(s_.rng, 1, 2)) {
                    random_step(m);
                }
                if (m.inventory.empty()) {
                    auto pit = L.piles.find(m.pos);
                    if (pit != L.piles.end()) {
                        auto w = std::find_if(pit->second.begin(), pit->second.end(),
                                              [](const Item& i) { return i.kind == ItemKind::Weapon; });
                        if (w != pit->second.end()) {
                            m.inventory.push_back(std::move(*w));
                            pit->second.erase(w);
                            if (pit->second.empty()) L.piles.erase(pit);
                        }
                    }
                }
                break;
            }
        }
    }
}

void Engine::advance_world() {
    monster_turns();
    s_.turn += r_.turn_delta;
    if (!s_.running()) return;

    const Hunger before = pl().hunger();
    pl().nutrition -= r_.turn_delta;
    const Hunger after = pl().hunger();
    if (after != before) {
        switch (after) {
            case Hunger::Hungry: msg("You are beginning to feel hungry."); break;
            case Hunger::Weak: msg("You are beginning to feel weak."); break;
            case Hunger::Starving: msg("You are starving!"); break;
            default: break;
        }
    }
    if (pl().nutrition <= Rules::kStarvationDeath) return kill_player("starvation");
    if (pl().status.count(Status::Ill) && s_.turn - pl().ill_since >= Rules::kIllnessLimit) {
        return kill_player("illness");
    }
    if (s_.turn % Rules::kRegenInterval == 0 && pl().hp < pl().max_hp) ++pl().hp;
    pl().prayer_cooldown = std::max(0, pl().prayer_cooldown - r_.turn_delta);

    if (s_.full_game && rng_chance(s_.rng, 1, Rules::kRespawnOdds)) {
        std::vector<const MonsterStats*> pool;
        for (const auto& st : monster_catalog()) {
            if (st.kind == "kitten" || st.kind == "shopkeeper" || st.kind == "xorn") continue;
            if (st.difficulty <= pl().depth + 1) pool.push_back(&st);
        }
        std::vector<Pos> spots;
        for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
            const Pos p = pos_of(i);
            if (free_for_monster(p) && chebyshev(p, pl().pos) >= 8 && lvl().at(p) != TileKind::DoorOpen) spots.push_back(p);
        }
        if (!pool.empty() && !spots.empty()) {
            const MonsterStats* st = pool[static_cast<size_t>(rng_range(s_.rng, 0, int(pool.size()) - 1))];
            const Pos at = spots[static_cast<size_t>(rng_range(s_.rng, 0, int(spots.size()) - 1))];
            lvl().monsters.push_back({s_.next_id++, st->kind, at, st->hp, st->hp, Attitude::Hostile, st->xp, st->damage, {}});
        }
    }
}

void Engine::check_win() {
    if (!s_.running() || !s_.full_game) return;
    if (pl().depth != 1 || lvl().at(pl().pos) != TileKind::StairsUp) return;
    const bool has_amulet = std::any_of(pl().inventory.begin(), pl().inventory.end(),
                                        [](const Item& i) { return i.kind == ItemKind::Amulet; });
    if (has_amulet) {
        s_.done = {RunStatus::Won, "escaped with the Amulet"};
        msg("You escape the dungeon with the Amulet!");
    }
}

}  // namespace

bool corpse_is_fresh(const Item& corpse, int turn) { return turn - corpse.kill_turn <= Rules::kRotThreshold; }

StepResult step(GameState& state, const Action& action) {
    if (!state.running()) throw GameOver("the game has already ended");
    StepResult result;
    Engine engine(state, result);
    if (state.open_menu) {
        engine.menu_input(action);
    } else {
        engine.dispatch(action);
    }
    if (result.turn_delta > 0 && state.running()) engine.advance_world();
    engine.check_win();
    result.done = state.done.status;
    state.pending_messages = result.messages;
    return result;
}

}  // namespace netplay
