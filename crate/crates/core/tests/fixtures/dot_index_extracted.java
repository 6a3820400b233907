interface Named {
    default String packageName() {
        final int dotIdx = name().lastIndexOf('.');
        if (dotIdx < 0) {
            return "";
        } else {
            return name().substring(0, dotIdx);
        }
    }
    default String simpleName() {
        final int dotIdx = name().lastIndexOf('.');
        if (dotIdx < 0) {
            return name();
        } else {
            return name().substring(dotIdx + 1);
        }
    }
}
