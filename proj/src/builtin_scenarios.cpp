#include "netplay/scenario.hpp"

namespace netplay {

namespace {

// Shared map and placement blocks; variants differ in task, guide or success only.

constexpr const char* kBagBody = R"(MAP:
--------------
|............|
|............|
|............|
|............|
|............|
--------------
ENDMAP
OBJECT: rock AT 3 2
OBJECT: dagger AT 8 4
OBJECT: potion of water AT 11 1
OBJECT: scroll of light AT 5 5
INVENTORY: bag of holding
START: 1 1
TASK: "Put every object lying in this room into your bag of holding."
)";

constexpr const char* kBagSuccess =
    R"(SUCCESS: all(item_in_container("rock", "bag of holding"), item_in_container("dagger", "bag of holding"), item_in_container("potion", "bag of holding"), item_in_container("scroll", "bag of holding"))
LIMITS: time=200 llm_calls=60
)";

constexpr const char* kBagSolution = R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"Collect the rock first.","skill":"pickup","params":{"x":3,"y":2}}
seq: {"thoughts":"Next the dagger.","skill":"pickup","params":{"x":8,"y":4}}
seq: {"thoughts":"Now the potion.","skill":"pickup","params":{"x":11,"y":1}}
seq: {"thoughts":"And the scroll.","skill":"pickup","params":{"x":5,"y":5}}
seq: {"thoughts":"Stash the rock.","skill":"put_in","params":{"letter":"b"}}
seq: {"thoughts":"Stash the dagger.","skill":"put_in","params":{"letter":"c"}}
seq: {"thoughts":"Stash the potion.","skill":"put_in","params":{"letter":"d"}}
seq: {"thoughts":"Stash the scroll.","skill":"put_in","params":{"letter":"e"}}
always: {"thoughts":"Everything is in the bag.","skill":"finish_task","params":{}}
)";

constexpr const char* kMultiPickup = R"(NAME: multipickup
MAP:
--------------
|............|
|............|
|............|
|............|
|............|
--------------
ENDMAP
OBJECT: dagger AT 6 3
OBJECT: potion of healing AT 6 3
OBJECT: scroll of identify AT 6 3
OBJECT: food ration AT 6 3
START: 1 1
TASK: "Several objects are piled up at (6,3). Pick up all of them."
SUCCESS: all(has_item("dagger"), has_item("potion"), has_item("scroll"), has_item("food ration"))
LIMITS: time=200 llm_calls=40
)";

constexpr const char* kMultiPickupSolution = R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"Walk to the pile and open the pickup menu.","skill":"pickup","params":{"x":6,"y":3}}
seq: {"thoughts":"Mark the dagger.","skill":"press_key","params":{"key":"a"}}
seq: {"thoughts":"Mark the potion.","skill":"press_key","params":{"key":"b"}}
seq: {"thoughts":"Mark the scroll.","skill":"press_key","params":{"key":"c"}}
seq: {"thoughts":"Mark the food.","skill":"press_key","params":{"key":"d"}}
seq: {"thoughts":"Confirm the selection.","skill":"press_key","params":{"key":"ENTER"}}
always: {"thoughts":"All picked up.","skill":"finish_task","params":{}}
)";

constexpr const char* kWandBody = R"(MAP:
-----------
|.........|
|.........|
|....S....|
|.........|
|.........|
-----------
ENDMAP
LEGEND: 'S'=statue
INVENTORY: wand of striking UNIDENTIFIED
START: 1 1
TASK: "There is a statue in this room. Hit the statue with your wand."
)";

constexpr const char* kWandSuccess = R"(SUCCESS: feature_destroyed("statue")
LIMITS: time=200 llm_calls=40
)";

constexpr const char* kWandSolution = R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"Stand west of the statue.","skill":"move_to","params":{"x":4,"y":3}}
seq: {"thoughts":"Zap the wand.","skill":"zap","params":{"letter":"a"}}
seq: {"thoughts":"The statue is to the east.","skill":"press_key","params":{"key":"l"}}
always: {"thoughts":"Done.","skill":"finish_task","params":{}}
)";

constexpr const char* kShelfBody = R"(MAP:
--------------
|............|
|............|
|............|
|............|
|............|
--------------
ENDMAP
OBJECT: wand of digging AT 3 2
OBJECT: ring of protection AT 7 4
OBJECT: potion of water AT 10 2
START: 1 3
)";

constexpr const char* kFountainBody = R"(MAP:
--------------
|............|
|............|
|.....{......|
|............|
|............|
--------------
ENDMAP
LEGEND: '{'=fountain
OBJECT: potion of healing AT 10 4
START: 1 1
)";

constexpr const char* kBoulderBody = R"(MAP:
-------              -------
|.....|              |.....|
|.....o######0#######o.....|
|.....|              |.....|
-------              -------
ENDMAP
LEGEND: 'o'=open_door '0'=boulder
REGION: west 1 1 5 3
REGION: east 22 1 26 3
OBJECT: wand of digging AT random IN west
OBJECT: rock AT random IN west
START: 2 2
)";

constexpr const char* kBoulderSolution = R"(retry /interrupted by: (?!A menu opened)/
when /wand of digging at \((\d+),(\d+)\)/: {"thoughts":"That wand can dig.","skill":"pickup","params":{"x":$1,"y":$2}}
seq: {"thoughts":"Find out where the corridor leads.","skill":"explore_level","params":{}}
seq: {"thoughts":"Stand in front of the boulder.","skill":"move_to","params":{"x":12,"y":2}}
seq: {"thoughts":"Dig through it.","skill":"zap","params":{"letter":"a"}}
seq: {"thoughts":"The boulder is east.","skill":"press_key","params":{"key":"l"}}
always: {"thoughts":"Keep going east.","skill":"explore_level","params":{}}
)";

constexpr const char* kEscapeBody = R"(MAP:
-------       ---------
|.....|       |.......|
|.....|       |.......|
|.....|       |.......|
|.....|       |.......|
-------       ---------
ENDMAP
REGION: cell 0 0 6 5
INVENTORY: wand of digging
INVENTORY: wand of teleportation
INVENTORY: ring of polymorph control
INVENTORY: wand of polymorph
START: 3 3
TASK: "You are locked inside a stone room without any door. Get out of it."
)";

constexpr const char* kEscapeSolution = R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"Dig a tunnel through the east wall.","skill":"zap","params":{"letter":"a"}}
seq: {"thoughts":"East.","skill":"press_key","params":{"key":"l"}}
seq: {"thoughts":"Walk into the tunnel.","skill":"move_to","params":{"x":6,"y":3}}
seq: {"thoughts":"Step outside.","skill":"move_to","params":{"x":7,"y":3}}
always: {"thoughts":"I am out.","skill":"finish_task","params":{}}
)";

constexpr const char* kCarryBody = R"(MAP:
-------  -----------  -------
|.....|  |.........|  |.....|
|.....o##o.........o##o.....|
|.....|  |.........|  |.....|
-------  -----------  -------
ENDMAP
LEGEND: 'o'=open_door
REGION: goal 23 1 27 3
OBJECT: huge stone AT 2 1
OBJECT: huge stone AT 2 3
OBJECT: bag of holding AT 4 2
MONSTER: jackal AT 13 1 hostile
MONSTER: jackal AT 15 3 hostile
MONSTER: newt AT 17 2 hostile
MONSTER: newt AT 12 3 hostile
INVENTORY: long sword WIELDED
START: 1 2
TASK: "Bring both huge stones into the room at the far east end and leave them on its floor."
)";

constexpr const char* kCarrySolution = R"(retry /interrupted by: (?!A menu opened)/
when /(?:jackal|newt) at \((\d+),(\d+)\), \d+ steps?, /: {"thoughts":"Deal with the monster first.","skill":"move_to","params":{"x":$1,"y":$2}}
seq: {"thoughts":"Take the first stone.","skill":"pickup","params":{"x":2,"y":1}}
seq: {"thoughts":"Find the way east.","skill":"explore_level","params":{}}
seq: {"thoughts":"Carry it into the goal room.","skill":"move_to","params":{"x":25,"y":2}}
seq: {"thoughts":"Leave it here.","skill":"drop","params":{"letter":"b"}}
seq: {"thoughts":"Fetch the second stone.","skill":"pickup","params":{"x":2,"y":3}}
seq: {"thoughts":"Back to the goal room.","skill":"move_to","params":{"x":25,"y":2}}
seq: {"thoughts":"Drop it next to the first.","skill":"drop","params":{"letter":"b"}}
always: {"thoughts":"Both stones are in place.","skill":"finish_task","params":{}}
)";

std::string join(std::initializer_list<std::string_view> parts) {
    std::string out;
    for (auto p : parts) out += p;
    return out;
}

std::vector<BuiltinScenario> make_all() {
    std::vector<BuiltinScenario> v;
    const std::string bag_guide =
        "GUIDE: \"Pick every object up first. Then put them into the bag one at a time; in a menu, mark entries with "
        "their letter and confirm with ENTER.\"\n";
    v.push_back({"bag", join({"NAME: bag\n", kBagBody, kBagSuccess}), kBagSolution});
    v.push_back({"guided-bag", join({"NAME: guided-bag\n", kBagBody, bag_guide, kBagSuccess}), kBagSolution});
    v.push_back({"multipickup", kMultiPickup, kMultiPickupSolution});

    const std::string wand_guide =
        "GUIDE: \"Stand next to the statue instead of on top of it, then zap the wand and answer the direction prompt "
        "with the key that points at the statue.\"\n";
    v.push_back({"wand", join({"NAME: wand\n", kWandBody, kWandSuccess}), kWandSolution});
    v.push_back({"guided-wand", join({"NAME: guided-wand\n", kWandBody, wand_guide, kWandSuccess}), kWandSolution});

    v.push_back({"ordered",
                 join({"NAME: ordered\n", kShelfBody,
                       "TASK: \"Pick up the wand first, then the ring, and the potion last.\"\n"
                       "SUCCESS: then(picked_up(\"wand\"), picked_up(\"ring\"), picked_up(\"potion\"))\n"
                       "LIMITS: time=200 llm_calls=40\n"}),
                 R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"Wand first.","skill":"pickup","params":{"x":3,"y":2}}
seq: {"thoughts":"Then the ring.","skill":"pickup","params":{"x":7,"y":4}}
seq: {"thoughts":"Potion last.","skill":"pickup","params":{"x":10,"y":2}}
always: {"thoughts":"Done in order.","skill":"finish_task","params":{}}
)"});
    v.push_back({"unordered",
                 join({"NAME: unordered\n", kShelfBody,
                       "TASK: \"Pick up the wand, the ring and the potion. The order does not matter.\"\n"
                       "SUCCESS: all(has_item(\"wand\"), has_item(\"ring\"), has_item(\"potion\"))\n"
                       "LIMITS: time=200 llm_calls=40\n"}),
                 R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"Closest first.","skill":"pickup","params":{"x":3,"y":2}}
seq: {"thoughts":"The potion is on the way.","skill":"pickup","params":{"x":10,"y":2}}
seq: {"thoughts":"Finally the ring.","skill":"pickup","params":{"x":7,"y":4}}
always: {"thoughts":"All collected.","skill":"finish_task","params":{}}
)"});
    v.push_back({"alternative",
                 join({"NAME: alternative\n", kFountainBody,
                       "TASK: \"Either drink from the fountain or pick up the potion. One of the two is enough.\"\n"
                       "SUCCESS: any(drank(\"fountain\"), has_item(\"potion\"))\n"
                       "LIMITS: time=200 llm_calls=40\n"}),
                 R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"The fountain is closer.","skill":"move_to","params":{"x":6,"y":3}}
seq: {"thoughts":"Drink from it.","skill":"quaff","params":{}}
always: {"thoughts":"Done.","skill":"finish_task","params":{}}
)"});
    v.push_back({"conditional",
                 join({"NAME: conditional\n", kFountainBody,
                       "ENGRAVING: 3 3 \"Drink from the fountain.\"\n"
                       "TASK: \"Read the engraving in this room. If it tells you to drink from the fountain, do that; "
                       "otherwise pick up the potion.\"\n"
                       "SUCCESS: all(drank(\"fountain\"), not(picked_up(\"potion\")))\n"
                       "LIMITS: time=200 llm_calls=40\n"}),
                 R"(retry /interrupted by: (?!A menu opened)/
seq: {"thoughts":"Go to the engraving.","skill":"move_to","params":{"x":3,"y":3}}
seq: {"thoughts":"Read it.","skill":"read_floor","params":{}}
seq: {"thoughts":"It says to drink from the fountain.","skill":"move_to","params":{"x":6,"y":3}}
seq: {"thoughts":"Drink.","skill":"quaff","params":{}}
always: {"thoughts":"Done.","skill":"finish_task","params":{}}
)"});

    const std::string boulder_task = "TASK: \"Get into the room on the east side of the level.\"\n";
    const std::string boulder_success = "SUCCESS: in_region(\"east\")\nLIMITS: time=500 llm_calls=80\n";
    v.push_back({"boulder", join({"NAME: boulder\n", kBoulderBody, boulder_task, boulder_success}), kBoulderSolution});
    v.push_back({"focused-boulder",
                 join({"NAME: focused-boulder\n", kBoulderBody,
                       "TASK: \"A boulder blocks the corridor between the two rooms. Get rid of the boulder.\"\n"
                       "SUCCESS: boulder_removed(13, 2)\nLIMITS: time=500 llm_calls=80\n"}),
                 kBoulderSolution});
    v.push_back({"guided-boulder",
                 join({"NAME: guided-boulder\n", kBoulderBody, boulder_task,
                       "GUIDE: \"Boulders in this dungeon cannot be pushed. Look for a tool that destroys rock, stand "
                       "in front of the boulder and use the tool in its direction.\"\n",
                       boulder_success}),
                 kBoulderSolution});

    const std::string escape_success = "SUCCESS: escaped_region(\"cell\")\nLIMITS: time=500 llm_calls=80\n";
    v.push_back({"escape", join({"NAME: escape\n", kEscapeBody, escape_success}), kEscapeSolution});
    v.push_back({"hint-escape",
                 join({"NAME: hint-escape\n", kEscapeBody,
                       "GUIDE: \"Your inventory offers three ways out: a wand that digs through walls, a wand that "
                       "teleports you when zapped at yourself, and a ring of polymorph control that lets you pick a "
                       "wall-passing form after zapping the polymorph wand at yourself.\"\n",
                       escape_success}),
                 kEscapeSolution});

    const std::string carry_success = "SUCCESS: items_in_region(\"huge stone\", \"goal\", 2)\nLIMITS: time=500 llm_calls=80\n";
    v.push_back({"carry", join({"NAME: carry\n", kCarryBody, carry_success}), kCarrySolution});
    v.push_back({"guided-carry",
                 join({"NAME: guided-carry\n", kCarryBody,
                       "GUIDE: \"The stones are too heavy to carry together. Carry them one at a time, and kill the "
                       "monsters in the middle room before crossing it.\"\n",
                       carry_success}),
                 kCarrySolution});
    return v;
}

}  // namespace

const std::vector<BuiltinScenario>& builtin_scenario_sources() {
    static const std::vector<BuiltinScenario> all = make_all();
    return all;
}

std::vector<ScenarioSpec> builtin_scenarios() {
    std::vector<ScenarioSpec> out;
    for (const auto& b : builtin_scenario_sources()) out.push_back(parse_scenario(b.source));
    return out;
}

const BuiltinScenario* find_builtin(std::string_view name) {
    for (const auto& b : builtin_scenario_sources()) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

}  // namespace netplay
