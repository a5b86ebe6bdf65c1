"""
General purpose list utilities.
"""


def select_from_list(
    master_list,
    first=None,
    last=None,
    skip=[],
    only=[],
    loose=True,
    ):
    """
    Select part of a list of names. The list is sorted case-insensitively;
    first and last bound the selection (inclusive), skip removes names
    and a nonempty only keeps just those names. With loose=True the
    comparisons ignore case and first/last need not be members.
    """

    sorted_list = sorted(master_list, key=lambda s: s.lower())

    def same(a, b):
        if loose:
            return a.lower() == b.lower()
        return a == b

    sub_list = []
    before_first = first is not None
    after_last = False

    for element in sorted_list:

        if before_first:
            if loose and element.lower() >= first.lower():
                before_first = False
            elif same(element, first):
                before_first = False

        if last is not None and loose and element.lower() > last.lower():
            after_last = True

        if before_first or after_last:
            continue

        if skip is not None and any(same(element, x) for x in skip):
            continue

        if only is not None and len(only) > 0:
            if not any(same(element, x) for x in only):
                continue

        sub_list.append(element)

        if last is not None and not loose and element == last:
            after_last = True

    return(sub_list)
